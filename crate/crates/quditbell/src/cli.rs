use std::ffi::OsString;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::anyhow;
use clap::{Args, Parser, Subcommand, ValueEnum};
use quditbell_core::bell::{bell_qubit, bell_qudit, enumerate_bell_basis, Sign};
use quditbell_core::discriminator::{
    discriminate, discrimination_circuits, DiscriminatorConfig, ParityPairSet, PhaseDecoding,
    Schedule,
};
use quditbell_core::netcost::{baseline_cost, protocol_cost, CostReport, Topology, TopologyKind};
use quditbell_core::outsourcing::{closure_map, HadamardPair};
use quditbell_core::{checked_len, BellIndex, StateVector};

use crate::config;
use crate::report::{
    render, round12, BenchRecord, CaseRecord, ClosureRecord, CostRecord, DiscriminationRecord,
    Format, Table1Row,
};
use crate::text::write_circuit;
use crate::verify::{self, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "quditbell",
    version,
    about = "Non-destructive qudit Bell state discrimination"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discriminate one Bell state, or every state of the basis when no
    /// label is given.
    Discriminate(DiscriminateArgs),
    /// Ancilla outcomes for the four two-qubit Bell states.
    Table1,
    /// Run an invariant suite; exits 1 on the first failure.
    Verify {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Label permutations of two-qudit Bell states under Fourier pairs.
    Closure {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..=16))]
        d: u64,
        #[arg(long, value_enum, default_value_t = VariantArg::Both)]
        variant: VariantArg,
    },
    /// Communication and gate costs of both protocols on one network.
    Cost(CostArgs),
    /// Time a full discrimination of a large register.
    Bench {
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 18)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        p: usize,
    },
}

#[derive(Debug, Args)]
pub struct DiscriminateArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, requires = "q")]
    pub p: Option<usize>,
    /// Comma-separated parities `q_1,…,q_{n−1}`.
    #[arg(long, requires = "p", value_delimiter = ',')]
    pub q: Option<Vec<usize>>,
    /// Network shape; picks the parity pairs (chain or hub at wire 0).
    #[arg(long, value_enum, default_value_t = TopologyArg::Linear)]
    pub topology: TopologyArg,
    #[arg(long, value_enum, default_value_t = ScheduleArg::PhaseFirst)]
    pub schedule: ScheduleArg,
    #[arg(long, value_enum, default_value_t = DecodingArg::Standard)]
    pub decoding: DecodingArg,
    /// Print the circuits in text form instead of running them.
    #[arg(long)]
    pub emit_circuits: bool,
}

#[derive(Debug, Args)]
pub struct CostArgs {
    #[arg(long, value_enum)]
    pub topology: TopologyArg,
    #[arg(long)]
    pub n: usize,
    /// Alice's position (0-based); defaults to the hub on a star and the
    /// far end of a line.
    #[arg(long)]
    pub alice: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TopologyArg {
    Star,
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    PhaseFirst,
    ParityFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DecodingArg {
    Standard,
    Swapped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    HHdag,
    HdagH,
    Both,
}

impl From<TopologyArg> for TopologyKind {
    fn from(t: TopologyArg) -> Self {
        match t {
            TopologyArg::Star => TopologyKind::Star,
            TopologyArg::Linear => TopologyKind::Linear,
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Well-formed flags with values the model rejects.
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Failure(#[from] anyhow::Error),
}

fn usage(err: impl std::fmt::Display) -> CliError {
    CliError::Usage(err.to_string())
}

pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let out = invoke(args);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.code)
}

/// Parses `args` (program name first) and runs the command.
pub fn invoke<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let text = err.render().to_string();
            let code = err.exit_code() as u8;
            return if err.use_stderr() {
                Outcome {
                    stderr: text,
                    code,
                    ..Outcome::default()
                }
            } else {
                Outcome {
                    stdout: text,
                    code,
                    ..Outcome::default()
                }
            };
        }
    };
    if let Err(err) = config::apply_env() {
        return Outcome {
            stderr: format!("error: {err:#}\n"),
            code: 2,
            ..Outcome::default()
        };
    }
    match run(&cli) {
        Ok(out) => out,
        Err(CliError::Usage(msg)) => Outcome {
            stderr: format!("error: {msg}\n\nFor more information, try '--help'.\n"),
            code: 2,
            ..Outcome::default()
        },
        Err(CliError::Failure(err)) => Outcome {
            stderr: format!("error: {err:#}\n"),
            code: 1,
            ..Outcome::default()
        },
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let stdout = match &cli.command {
        Command::Discriminate(args) => return discriminate_cmd(args, cli.format),
        Command::Table1 => render(&table1()?, cli.format)?,
        Command::Verify { suite, seed } => {
            let records = verify::run(*suite, *seed);
            let stdout = render(&records, cli.format)?;
            return Ok(match records.iter().find(|r| !r.passed) {
                Some(CaseRecord { id, detail, .. }) => Outcome {
                    stdout,
                    stderr: format!("first failing case: {id}: {detail}\n"),
                    code: 1,
                },
                None => Outcome {
                    stdout,
                    ..Outcome::default()
                },
            });
        }
        Command::Closure { d, variant } => render(&closure(*d as usize, *variant)?, cli.format)?,
        Command::Cost(args) => render(&cost(args)?, cli.format)?,
        Command::Bench { d, n, p } => render(&[bench(*d, *n, *p)?], cli.format)?,
    };
    Ok(Outcome {
        stdout,
        ..Outcome::default()
    })
}

fn pair_set(topology: TopologyArg, n: usize) -> Result<ParityPairSet, CliError> {
    match topology {
        TopologyArg::Star => ParityPairSet::star(n, 0),
        TopologyArg::Linear => ParityPairSet::consecutive(n),
    }
    .map_err(usage)
}

fn protocol_moves(topology: TopologyArg, n: usize) -> Result<usize, CliError> {
    let t = Topology::new(topology.into(), n, 0).map_err(usage)?;
    Ok(protocol_cost(&t).map_err(anyhow::Error::from)?.qudits_moved)
}

fn record(
    state: &StateVector,
    cfg: &DiscriminatorConfig,
    qudits_moved: usize,
) -> Result<DiscriminationRecord, CliError> {
    let r = discriminate(state, cfg).map_err(anyhow::Error::from)?;
    let fidelity = r.post_state.fidelity(state).map_err(anyhow::Error::from)?;
    Ok(DiscriminationRecord {
        d: state.dim(),
        n: state.n_wires(),
        p: r.p(),
        q: r.q().to_vec(),
        outcomes: r.ancilla_outcomes,
        fidelity: round12(fidelity),
        deterministic: r.deterministic,
        gate_count: r.two_qudit_gates,
        qudits_moved,
    })
}

fn discriminate_cmd(args: &DiscriminateArgs, format: Format) -> Result<Outcome, CliError> {
    let mut cfg = DiscriminatorConfig::with_pairs(pair_set(args.topology, args.n)?);
    cfg.schedule = match args.schedule {
        ScheduleArg::PhaseFirst => Schedule::PhaseFirst,
        ScheduleArg::ParityFirst => Schedule::ParityFirst,
    };
    cfg.decoding = match args.decoding {
        DecodingArg::Standard => PhaseDecoding::Standard,
        DecodingArg::Swapped => PhaseDecoding::Swapped,
    };
    if args.d < 2 {
        return Err(usage(format!("--d must be at least 2, got {}", args.d)));
    }
    if args.emit_circuits {
        let mut stdout = String::new();
        for (m, c) in discrimination_circuits(args.d, &cfg).map_err(usage)? {
            stdout.push_str(&format!("# {m:?}\n"));
            stdout.push_str(&write_circuit(&c));
        }
        return Ok(Outcome {
            stdout,
            ..Outcome::default()
        });
    }
    checked_len(args.d, args.n + 1).map_err(usage)?;
    let labels = match (&args.p, &args.q) {
        (Some(p), Some(q)) => {
            if q.len() + 1 != args.n {
                return Err(usage(format!(
                    "--q needs {} parities for --n {}, got {}",
                    args.n - 1,
                    args.n,
                    q.len()
                )));
            }
            vec![BellIndex::new(args.d, *p, q.clone()).map_err(usage)?]
        }
        _ => enumerate_bell_basis(args.d, args.n).map_err(usage)?,
    };
    let moved = protocol_moves(args.topology, args.n)?;
    let mut records = Vec::with_capacity(labels.len());
    for idx in &labels {
        let state = bell_qudit(idx).map_err(anyhow::Error::from)?;
        records.push(record(&state, &cfg, moved)?);
    }
    Ok(Outcome {
        stdout: render(&records, format)?,
        ..Outcome::default()
    })
}

/// The four two-qubit Bell states in the order `ψ⁺, ψ⁻, φ⁺, φ⁻`.
pub fn table1() -> Result<Vec<Table1Row>, CliError> {
    let cfg = DiscriminatorConfig::consecutive(2).map_err(usage)?;
    let moved = protocol_moves(TopologyArg::Linear, 2)?;
    let rows = [
        ("psi+", 0, Sign::Plus),
        ("psi-", 0, Sign::Minus),
        ("phi+", 1, Sign::Plus),
        ("phi-", 1, Sign::Minus),
    ];
    rows.into_iter()
        .map(|(name, x, sign)| {
            let state = bell_qubit(2, x, sign).map_err(anyhow::Error::from)?;
            let run = record(&state, &cfg, moved)?;
            Ok(Table1Row {
                state: name.to_string(),
                a1: run.outcomes[0],
                a2: run.outcomes[1],
                run,
            })
        })
        .collect()
}

pub fn closure(d: usize, variant: VariantArg) -> Result<Vec<ClosureRecord>, CliError> {
    let variants: &[(HadamardPair, &str)] = match variant {
        VariantArg::HHdag => &[(HadamardPair::HHdag, "H*Hdag")],
        VariantArg::HdagH => &[(HadamardPair::HdagH, "Hdag*H")],
        VariantArg::Both => &[
            (HadamardPair::HHdag, "H*Hdag"),
            (HadamardPair::HdagH, "Hdag*H"),
        ],
    };
    let mut out = Vec::new();
    for &(v, name) in variants {
        for entry in closure_map(d, v).map_err(anyhow::Error::from)? {
            out.push(ClosureRecord {
                d,
                variant: name.to_string(),
                p: entry.from.p(),
                q: entry.from.q()[0],
                to_p: entry.to.p(),
                to_q: entry.to.q()[0],
                phase_re: round12(entry.phase.re) + 0.0,
                phase_im: round12(entry.phase.im) + 0.0,
            });
        }
    }
    Ok(out)
}

fn cost_record(r: &CostReport) -> CostRecord {
    CostRecord {
        protocol: r.protocol.to_string(),
        topology: r.topology.kind.to_string(),
        n: r.topology.n,
        alice: r.topology.alice,
        qudits_moved: r.qudits_moved,
        gate_count: r.two_qudit_gates,
        per_player_gate_counts: r.per_player_gate_counts.clone(),
        edge_tallies: r.edge_tallies.iter().map(|(_, c)| *c).collect(),
    }
}

pub fn cost(args: &CostArgs) -> Result<Vec<CostRecord>, CliError> {
    let alice = args.alice.unwrap_or(match args.topology {
        TopologyArg::Star => 0,
        TopologyArg::Linear => args.n.saturating_sub(1),
    });
    let t = Topology::new(args.topology.into(), args.n, alice).map_err(usage)?;
    let protocol = protocol_cost(&t).map_err(anyhow::Error::from)?;
    let baseline = baseline_cost(&t).map_err(usage)?;
    Ok(vec![cost_record(&protocol), cost_record(&baseline)])
}

pub fn bench(d: usize, n: usize, p: usize) -> Result<BenchRecord, CliError> {
    let amplitudes = checked_len(d, n + 1).map_err(usage)?;
    let idx = BellIndex::new(d, p, vec![0; n.saturating_sub(1)]).map_err(usage)?;
    let state = bell_qudit(&idx).map_err(anyhow::Error::from)?;
    let cfg = DiscriminatorConfig::consecutive(n).map_err(usage)?;
    let start = Instant::now();
    let run = record(&state, &cfg, protocol_moves(TopologyArg::Linear, n)?)?;
    let seconds = start.elapsed().as_secs_f64();
    if run.p != p || !run.deterministic {
        return Err(anyhow!(
            "bench discrimination returned p={} deterministic={}",
            run.p,
            run.deterministic
        )
        .into());
    }
    Ok(BenchRecord {
        run,
        amplitudes,
        seconds,
    })
}
