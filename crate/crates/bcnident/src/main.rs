//! Command-line front end: compile textual network programs, simulate,
//! run observability/controllability checks, build pairwise test banks,
//! script the four sampling regimes against a known plant, identify
//! networks from data files, and test two networks for equivalence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use bcnident::analysis::{
    build_cover_sequence, build_o1_test, find_o3_test, is_controllable, is_observable_bn, O1Test,
};
use bcnident::dynamics::{equivalent, Bcn};
use bcnident::harness::{random_cover_sequence, ExperimentLog, Plant};
use bcnident::ident::{
    identify_bcn_o1_multi, identify_bcn_o1_single, identify_bcn_o3, identify_bn,
    identify_bn_state_observed, IdentResult, SampleSet,
};
use bcnident::logic::compile_source;

#[derive(Parser)]
#[command(name = "bcnident", version, about = "Boolean network identification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a Boolean network program into its matrix form.
    Compile {
        /// Source file (.bnl).
        src: PathBuf,
        /// Where to write the network JSON.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Simulate a network and print the state and output trajectories.
    Simulate {
        /// Network JSON file.
        net: PathBuf,
        /// Initial state index (1-based).
        #[arg(long)]
        x0: usize,
        /// Comma-separated input values; may be empty for a single step.
        #[arg(long, default_value = "")]
        inputs: String,
    },
    /// Check a network property; exits 0 when it holds, 1 when not.
    Check {
        /// Network JSON file.
        net: PathBuf,
        /// Which property to check.
        #[arg(long, value_enum)]
        property: Property,
        /// Search bound for the single-test-sequence property
        /// (default: the state count).
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Build a pairwise test bank for a network.
    O1test {
        /// Network JSON file.
        net: PathBuf,
        /// Where to write the test JSON.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Generate experiment data from a known plant.
    GenData {
        /// Network JSON file (the plant).
        net: PathBuf,
        /// Sampling regime (1-4).
        #[arg(long)]
        case: u8,
        /// Pairwise test bank JSON (regimes 3 and 4).
        #[arg(long)]
        test: Option<PathBuf>,
        /// Cover walk: "auto" or comma-separated input values (regime 3).
        #[arg(long)]
        cover: Option<String>,
        /// Initial-state policy: a state index or "all".
        #[arg(long)]
        x0: Option<String>,
        /// Run length (regimes 1 and 2) or single-test search bound
        /// (regime 3 without --test).
        #[arg(long)]
        len: Option<usize>,
        /// Randomize the automatic cover walk with this seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Where to write the experiment log JSON.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Identify a network from a data file.
    Identify {
        /// Sampling regime the data came from (1-4).
        #[arg(long)]
        case: u8,
        /// Data file: an experiment log or a bare sample set.
        #[arg(long)]
        data: PathBuf,
        /// Window length for regime 1 (default: 2^n from the data).
        #[arg(long)]
        window: Option<usize>,
        /// Pairwise test bank JSON (overrides the one in the log).
        #[arg(long)]
        test: Option<PathBuf>,
        /// Cover walk as comma-separated input values (overrides the log).
        #[arg(long)]
        cover: Option<String>,
        /// Where to write the identification result JSON.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Test two networks for equivalence; prints the witness relabeling
    /// and exits 0 when equivalent, exits 1 otherwise.
    Equiv {
        /// First network JSON file.
        a: PathBuf,
        /// Second network JSON file.
        b: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Property {
    /// Autonomous-network observability via effective output sequences.
    ObservableBn,
    /// Joint reachability to and from every state.
    Controllable,
    /// Pairwise distinguishability of all states.
    O1,
    /// Existence of one test sequence distinguishing all states.
    O3,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn read_net(path: &Path) -> anyhow::Result<Bcn> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    Bcn::from_json(&text).with_context(|| format!("{} is not a valid network", path.display()))
}

fn read_test(path: &Path) -> anyhow::Result<O1Test> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    O1Test::from_json(&text).with_context(|| format!("{} is not a valid test bank", path.display()))
}

fn parse_csv(text: &str) -> anyhow::Result<Vec<usize>> {
    text.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| anyhow!("'{t}' is not a positive integer"))
        })
        .collect()
}

/// Data files may be a bare sample set or a full experiment log; a log
/// also carries defaults for the test bank and cover walk.
fn read_data(path: &Path) -> anyhow::Result<(SampleSet, Option<O1Test>, Option<Vec<usize>>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    if let Ok(log) = ExperimentLog::from_json(&text) {
        return Ok((log.data, log.o1_test, log.cover));
    }
    let data = SampleSet::from_json(&text)
        .with_context(|| format!("{} is not a valid data file", path.display()))?;
    Ok((data, None, None))
}

fn write_out(path: &Path, content: &str) -> anyhow::Result<()> {
    fs::write(path, content).with_context(|| format!("cannot write {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Compile { src, output } => {
            let text = fs::read_to_string(&src)
                .with_context(|| format!("cannot read {}", src.display()))?;
            let sys = compile_source(&text)?;
            write_out(&output, &sys.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { net, x0, inputs } => {
            let sys = read_net(&net)?;
            let inputs = parse_csv(&inputs)?;
            let (states, outputs) = sys.simulate_idx(x0, &inputs)?;
            println!(
                "{}",
                serde_json::json!({ "states": states, "outputs": outputs })
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            net,
            property,
            max_len,
        } => {
            let sys = read_net(&net)?;
            let holds = match property {
                Property::ObservableBn => is_observable_bn(&sys)?,
                Property::Controllable => is_controllable(&sys)?,
                Property::O1 => match build_o1_test(&sys) {
                    Ok(_) => true,
                    Err(bcnident::Error::NotDistinguishable { .. }) => false,
                    Err(e) => return Err(e.into()),
                },
                Property::O3 => {
                    let bound = max_len.unwrap_or_else(|| sys.state_count());
                    find_o3_test(&sys, bound)?.is_some()
                }
            };
            println!("{holds}");
            Ok(if holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::O1test { net, output } => {
            let sys = read_net(&net)?;
            let test = build_o1_test(&sys)?;
            write_out(&output, &test.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::GenData {
            net,
            case,
            test,
            cover,
            x0,
            len,
            seed,
            output,
        } => {
            let sys = read_net(&net)?;
            let log = gen_data(sys, case, test, cover, x0, len, seed)?;
            write_out(&output, &log.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Identify {
            case,
            data,
            window,
            test,
            cover,
            output,
        } => {
            let res = identify(case, &data, window, test, cover)?;
            write_out(&output, &res.to_json())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Equiv { a, b } => {
            let a = read_net(&a)?;
            let b = read_net(&b)?;
            match equivalent(&a, &b)? {
                Some(g) => {
                    println!("{}", serde_json::json!({ "G": g.as_slice() }));
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    eprintln!("not equivalent");
                    Ok(ExitCode::from(1))
                }
            }
        }
    }
}

/// Initial-state policy for data generation: one state or all of them.
fn parse_x0(text: Option<&str>, default_all: bool, sc: usize) -> anyhow::Result<Vec<usize>> {
    match text {
        None => Ok(if default_all {
            (1..=sc).collect()
        } else {
            vec![1]
        }),
        Some("all") => Ok((1..=sc).collect()),
        Some(t) => {
            let x0 = t
                .parse::<usize>()
                .map_err(|_| anyhow!("--x0 must be a state index or 'all'"))?;
            Ok(vec![x0])
        }
    }
}

fn gen_data(
    sys: Bcn,
    case: u8,
    test: Option<PathBuf>,
    cover: Option<String>,
    x0: Option<String>,
    len: Option<usize>,
    seed: Option<u64>,
) -> anyhow::Result<ExperimentLog> {
    let sc = sys.state_count();
    let mut plant = Plant::new(sys);
    match case {
        1 => {
            let x0s = parse_x0(x0.as_deref(), false, sc)?;
            let len = len.unwrap_or(4 * sc);
            Ok(plant.gen_case1(&x0s, len)?)
        }
        2 => {
            let x0s = parse_x0(x0.as_deref(), true, sc)?;
            let len = len.unwrap_or(2);
            Ok(plant.gen_case2(&x0s, len)?)
        }
        3 => {
            let x0s = parse_x0(x0.as_deref(), false, sc)?;
            let [x0] = x0s.as_slice() else {
                bail!("regime 3 restarts a single subject; give one --x0")
            };
            let walk = match cover.as_deref() {
                None | Some("auto") => match seed {
                    None => build_cover_sequence(plant.system(), *x0)?.inputs,
                    Some(s) => {
                        let mut rng = ChaCha8Rng::seed_from_u64(s);
                        random_cover_sequence(plant.system(), *x0, &mut rng)?.inputs
                    }
                },
                Some(csv) => parse_csv(csv)?,
            };
            match test {
                Some(path) => {
                    let test = read_test(&path)?;
                    Ok(plant.gen_case3_o1(*x0, &walk, &test)?)
                }
                None => {
                    let bound = len.unwrap_or(sc);
                    let seq = find_o3_test(plant.system(), bound)?.ok_or_else(|| {
                        anyhow!("no single test sequence up to length {bound}; supply --test")
                    })?;
                    Ok(plant.gen_case3_o3(*x0, &walk, &seq)?)
                }
            }
        }
        4 => {
            let path = test.ok_or_else(|| anyhow!("regime 4 needs --test"))?;
            let test = read_test(&path)?;
            match x0.as_deref() {
                None | Some("all") => {
                    let x0s: Vec<usize> = (1..=sc).collect();
                    Ok(plant.gen_case4(&x0s, &test)?)
                }
                Some(t) => {
                    let p0 = parse_csv(t)?;
                    Ok(plant.gen_case4_p0(&p0, &test)?)
                }
            }
        }
        _ => bail!("--case must be 1, 2, 3, or 4"),
    }
}

fn identify(
    case: u8,
    data_path: &Path,
    window: Option<usize>,
    test: Option<PathBuf>,
    cover: Option<String>,
) -> anyhow::Result<IdentResult> {
    let (data, log_test, log_cover) = read_data(data_path)?;
    let test = match test {
        Some(path) => Some(read_test(&path)?),
        None => log_test,
    };
    let cover = match cover {
        Some(csv) => Some(parse_csv(&csv)?),
        None => log_cover,
    };
    match case {
        1 => {
            let window = match (window, data.n) {
                (Some(w), _) => w,
                (None, Some(n)) => 1usize
                    .checked_shl(n as u32)
                    .ok_or_else(|| anyhow!("declared n = {n} is too large"))?,
                (None, None) => bail!("the data declares no n; give --window"),
            };
            Ok(identify_bn(&data, window)?)
        }
        2 => Ok(identify_bn_state_observed(&data)?),
        3 => {
            let cover = match cover {
                Some(w) => w,
                // Member t+1 replays one more cover input than member t,
                // so the walk can be read back off the members.
                None => {
                    let members: Vec<_> = data.members().collect();
                    (0..members.len().saturating_sub(1))
                        .map(|t| {
                            members[t + 1].inputs.get(t).copied().ok_or_else(|| {
                                anyhow!("cannot infer the cover walk; give --cover")
                            })
                        })
                        .collect::<anyhow::Result<Vec<usize>>>()?
                }
            };
            match test {
                Some(test) => Ok(identify_bcn_o1_single(&data, &cover, &test)?),
                None => {
                    let test_len = data
                        .members()
                        .next()
                        .map(|m| m.inputs.len())
                        .ok_or_else(|| anyhow!("the data has no members"))?;
                    Ok(identify_bcn_o3(&data, &cover, test_len)?)
                }
            }
        }
        4 => {
            let test = test.ok_or_else(|| anyhow!("regime 4 needs --test or a log file"))?;
            Ok(identify_bcn_o1_multi(&data, &test)?)
        }
        _ => bail!("--case must be 1, 2, 3, or 4"),
    }
}
