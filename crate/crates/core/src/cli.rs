//! The `tpath` command line.
//!
//! Exit codes: 0 on success or a yes answer, 1 when there is no solution,
//! 2 on usage, input or I/O errors.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::addition::{solve_addition_dp_with_stats, solve_addition_exhaustive_with_stats, PathWithDetours};
use crate::deletion::{
    branching_node_bound, longest_st_path, solve_deletion_branching_with_stats, solve_deletion_exhaustive_with_stats,
    DeletionSolution,
};
use crate::dot::export_dot;
use crate::generate::{random_ksum, random_spmve, rng};
use crate::io::{parse_instance, serialize_instance, to_document, Instance};
use crate::kernel::{apply_rules, solve_deletion_via_kernel_with_stats, to_false_promises, Kernelized};
use crate::model::PlanningModel;
use crate::rational::{parse_rational, Rational};
use crate::reductions::{reduce_ksum, reduce_spmve_thm1, reduce_spmve_thm2, KsumInstance, SpmveInstance};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "tpath", version, about = "Simulate present-biased agents and solve T-path deletion/addition")]
struct Cli {
    /// Write the result to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the agent and print its walk with the perceived cost at each stop.
    Simulate { file: PathBuf },
    /// Delete at most k arcs so the agent follows a T-path.
    SolveDelete {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = DeleteSolver::Branching)]
        solver: DeleteSolver,
        /// Include search counters.
        #[arg(long)]
        stats: bool,
    },
    /// Add at most k candidate arcs so the agent follows a T-path.
    SolveAdd {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = AddSolver::Exhaustive)]
        solver: AddSolver,
        #[arg(long)]
        stats: bool,
    },
    /// Apply the reduction rules and print the kernel with its trace.
    Kernelize { file: PathBuf },
    /// Build an instance from a reduction.
    Generate {
        #[command(subcommand)]
        which: Generator,
    },
    /// Print the instance as a Graphviz digraph.
    ExportDot { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DeleteSolver {
    Exhaustive,
    Branching,
    Kernel,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AddSolver {
    Exhaustive,
    Dp,
}

#[derive(clap::Args, Debug)]
struct SpmveSource {
    /// Read the source instance (kind `spmve`) instead of drawing one.
    #[arg(long)]
    source: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Vertex limit for a random source.
    #[arg(long, default_value_t = 6)]
    vertices: usize,
    /// Budget limit for a random source.
    #[arg(long, default_value_t = 2)]
    max_k: usize,
    /// Threshold limit for a random source.
    #[arg(long, default_value_t = 10)]
    max_ell: u64,
}

#[derive(Subcommand, Debug)]
enum Generator {
    /// SP-MVE to deletion, for any bias.
    SpmveThm1 {
        #[command(flatten)]
        source: SpmveSource,
        #[arg(long, default_value = "1/2", value_parser = rational_arg)]
        beta: Rational,
    },
    /// SP-MVE to deletion with a pinned bias (ell even, at least 4).
    SpmveThm2 {
        #[command(flatten)]
        source: SpmveSource,
        /// Use an empty prescribed set.
        #[arg(long)]
        empty_t: bool,
    },
    /// Modified k-Sum to addition on a path with detours.
    Ksum {
        /// Read the source instance (kind `ksum`) instead of drawing one.
        #[arg(long)]
        source: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of sets for a random source.
        #[arg(long, default_value_t = 2)]
        sets: usize,
        #[arg(long, default_value_t = 4)]
        max_set: usize,
        #[arg(long, default_value_t = 10)]
        max_elem: u64,
        /// Put the two helper arcs in the graph (budget k) instead of the
        /// pool (budget k + 2).
        #[arg(long)]
        green_in_graph: bool,
    },
}

fn rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).ok_or_else(|| format!("`{text}` is not a rational \"p/q\""))
}

/// A failure that maps to exit code 2.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(err: E) -> Self {
        Failure(err.to_string())
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((text, code)) => match emit(cli.output.as_deref(), &text) {
            Ok(()) => code,
            Err(Failure(msg)) => {
                eprintln!("error: {msg}");
                EXIT_ERROR
            }
        },
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            EXIT_ERROR
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Instance, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn pretty(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    text
}

fn execute(command: &Command) -> Result<(String, i32), Failure> {
    match command {
        Command::Simulate { file } => {
            let run = match load(file)? {
                Instance::Model(m) => m.simulate(),
                Instance::Deletion(d) => d.model.simulate(),
                Instance::FpDeletion(d) => d.model.simulate(),
                Instance::Addition(a) => a.model.simulate(),
                other => return Err(Failure(format!("cannot simulate a `{:?}` instance", other.kind()))),
            };
            Ok((pretty(&run), EXIT_YES))
        }
        Command::SolveDelete { file, solver, stats } => {
            let Instance::Deletion(inst) = load(file)? else {
                return Err(Failure("solve-delete needs an instance of kind `deletion`".into()));
            };
            let (solution, counters): (Option<DeletionSolution>, Value) = match solver {
                DeleteSolver::Exhaustive => {
                    let (sol, st) = solve_deletion_exhaustive_with_stats(&inst);
                    (sol, json!({ "sets_tried": st.nodes, "simulations": st.simulations }))
                }
                DeleteSolver::Branching => {
                    let (sol, st) = solve_deletion_branching_with_stats(&inst);
                    let bound = branching_node_bound(longest_st_path(&inst.model), inst.k);
                    (sol, json!({ "nodes": st.nodes, "simulations": st.simulations, "node_bound": bound.to_string() }))
                }
                DeleteSolver::Kernel => {
                    let (sol, st) = solve_deletion_via_kernel_with_stats(&inst);
                    let counters = json!({
                        "trivial_no": st.trivial_no,
                        "kernel_vertices": st.kernel_vertices,
                        "kernel_arcs": st.kernel_arcs,
                        "feedback_edges": st.feedback_edges,
                        "sets_tried": st.search.nodes,
                    });
                    (sol, counters)
                }
            };
            let mut out = match &solution {
                Some(sol) => json!({ "result": "solution", "deleted": sol.deleted, "witness": sol.witness }),
                None => json!({ "result": "no-solution" }),
            };
            if *stats {
                out["stats"] = counters;
            }
            Ok((pretty(&out), if solution.is_some() { EXIT_YES } else { EXIT_NO }))
        }
        Command::SolveAdd { file, solver, stats } => {
            let Instance::Addition(inst) = load(file)? else {
                return Err(Failure("solve-add needs an instance of kind `addition`".into()));
            };
            let (solution, counters) = match solver {
                AddSolver::Exhaustive => {
                    let (sol, st) = solve_addition_exhaustive_with_stats(&inst);
                    (sol, json!({ "sets_tried": st.nodes, "simulations": st.simulations }))
                }
                AddSolver::Dp => {
                    let pwd = PathWithDetours::new(inst)?;
                    let (sol, st) = solve_addition_dp_with_stats(&pwd);
                    (sol, serde_json::to_value(st).expect("stats serialize"))
                }
            };
            let mut out = match &solution {
                Some(sol) => json!({ "result": "solution", "selected": sol.selected, "witness": sol.witness }),
                None => json!({ "result": "no-solution" }),
            };
            if *stats {
                out["stats"] = counters;
            }
            Ok((pretty(&out), if solution.is_some() { EXIT_YES } else { EXIT_NO }))
        }
        Command::Kernelize { file } => {
            let inst = match load(file)? {
                Instance::Deletion(d) => to_false_promises(&d),
                Instance::FpDeletion(d) => d,
                _ => return Err(Failure("kernelize needs a `deletion` or `fp_deletion` instance".into())),
            };
            let (kernel, trace) = apply_rules(&inst);
            let (out, code) = match kernel {
                Kernelized::Kernel(k) => {
                    let doc = to_document(&Instance::FpDeletion(k));
                    (json!({ "result": "kernel", "kernel": doc, "trace": trace }), EXIT_YES)
                }
                Kernelized::TrivialNo => (json!({ "result": "trivial-no", "trace": trace }), EXIT_NO),
            };
            Ok((pretty(&out), code))
        }
        Command::Generate { which } => generate(which).map(|text| (text, EXIT_YES)),
        Command::ExportDot { file } => Ok((export_dot(&load(file)?), EXIT_YES)),
    }
}

fn spmve_source(src: &SpmveSource, even_ell: bool) -> Result<SpmveInstance, Failure> {
    match &src.source {
        Some(path) => match load(path)? {
            Instance::Spmve(p) => Ok(p),
            _ => Err(Failure(format!("{}: expected an instance of kind `spmve`", path.display()))),
        },
        None => Ok(random_spmve(&mut rng(src.seed), src.vertices, src.max_k, src.max_ell, even_ell)),
    }
}

fn generate(which: &Generator) -> Result<String, Failure> {
    let inst = match which {
        Generator::SpmveThm1 { source, beta } => {
            Instance::Deletion(reduce_spmve_thm1(&spmve_source(source, false)?, beta)?)
        }
        Generator::SpmveThm2 { source, empty_t } => {
            Instance::Deletion(reduce_spmve_thm2(&spmve_source(source, true)?, *empty_t)?)
        }
        Generator::Ksum { source, seed, sets, max_set, max_elem, green_in_graph } => {
            let ksum: KsumInstance = match source {
                Some(path) => match load(path)? {
                    Instance::Ksum(q) => q,
                    _ => return Err(Failure(format!("{}: expected an instance of kind `ksum`", path.display()))),
                },
                None => random_ksum(&mut rng(*seed), *sets, *max_set, *max_elem),
            };
            Instance::Addition(reduce_ksum(&ksum, *green_in_graph)?.instance)
        }
    };
    Ok(serialize_instance(&inst))
}
