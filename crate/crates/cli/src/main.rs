mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fairgame_core::{
    build_gadget, check_determinacy, export_dot, oracle_fair, oracle_fair_values, oracle_values, parse_arena,
    random_arena, simulate, simulate_bounded, solve, synthesize, validate, values, Arena, Error, FairObjectiveSpec,
    GadgetKind, GameKind, GenParams, OracleBudget, Owner, Rational, StrategyMachine, SynthesizedStrategy,
};
use report::{LassoReport, Report};
use serde_json::json;

const EXIT_INPUT: u8 = 1;
const EXIT_DISAGREEMENT: u8 = 2;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "fairgame", version, about = "Mean-payoff and energy games under strong transition fairness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Game {
    Mp,
    Energy,
}

impl From<Game> for GameKind {
    fn from(g: Game) -> GameKind {
        match g {
            Game::Mp => GameKind::MeanPayoff,
            Game::Energy => GameKind::Energy,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Fair {
    P1,
    P2,
    None,
}

fn parse_player(s: &str) -> Result<Owner, String> {
    match s {
        "1" | "p1" => Ok(Owner::P1),
        "2" | "p2" => Ok(Owner::P2),
        _ => Err(format!("expected 1 or 2, got `{s}`")),
    }
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

#[derive(clap::Args)]
struct Objective {
    /// Objective of player 1.
    #[arg(long, value_enum, default_value = "mp")]
    game: Game,
    /// Mean-payoff threshold, `<int>` or `<int>/<posint>`.
    #[arg(long, value_parser = parse_rational, default_value = "0", allow_hyphen_values = true)]
    threshold: Rational,
}

impl Objective {
    fn spec(&self, a: &Arena) -> FairObjectiveSpec {
        FairObjectiveSpec::for_arena(a, self.game.into(), self.threshold)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Winning regions, credits and determinacy.
    Solve {
        #[command(flatten)]
        objective: Objective,
        #[arg(long)]
        json: bool,
        /// Also write the arena as Graphviz DOT.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        arena: PathBuf,
    },
    /// Optimal mean-payoff values.
    Value {
        #[arg(long)]
        json: bool,
        arena: PathBuf,
    },
    /// Print the gadget arena that reduces the fair game to a regular one.
    Gadget {
        #[arg(long, value_enum, default_value = "mp")]
        game: Game,
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
        arena: PathBuf,
    },
    /// Synthesize a winning strategy.
    Strategy {
        #[command(flatten)]
        objective: Objective,
        #[arg(long, value_parser = parse_player, default_value = "1")]
        player: Owner,
        /// Cut escalating schedules down to a finite machine losing at most this much.
        #[arg(long, value_parser = parse_rational)]
        epsilon: Option<Rational>,
        #[arg(long)]
        json: bool,
        arena: PathBuf,
    },
    /// Play two strategies against each other and report the resulting lasso.
    Simulate {
        #[command(flatten)]
        objective: Objective,
        /// Start node.
        #[arg(long)]
        start: String,
        /// Machine file for player 1; synthesized when absent.
        #[arg(long, value_name = "FILE")]
        p1: Option<PathBuf>,
        /// Machine file for player 2; synthesized when absent.
        #[arg(long, value_name = "FILE")]
        p2: Option<PathBuf>,
        #[arg(long, value_parser = parse_rational, default_value = "1/10")]
        epsilon: Rational,
        /// Give up after this many moves.
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        json: bool,
        arena: PathBuf,
    },
    /// Print a seeded random arena.
    Gen {
        #[arg(long, default_value_t = 4)]
        nodes: usize,
        #[arg(long, default_value_t = 3)]
        max_weight: i64,
        #[arg(long, value_enum, default_value = "none")]
        fair: Fair,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the solvers against brute-force enumeration on a tiny arena.
    Oracle {
        #[command(flatten)]
        objective: Objective,
        #[arg(long)]
        json: bool,
        arena: PathBuf,
    },
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_INPUT, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

fn load(path: &Path) -> Result<Arena, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_INPUT, msg: format!("{}: {e}", path.display()) })?;
    parse_arena(&text).map_err(|e| Failure { code: EXIT_INPUT, msg: format!("{}: {e}", path.display()) })
}

fn write_dot(path: &Option<PathBuf>, a: &Arena) -> Result<(), Failure> {
    if let Some(path) = path {
        std::fs::write(path, export_dot(a))
            .map_err(|e| Failure { code: EXIT_INPUT, msg: format!("{}: {e}", path.display()) })?;
    }
    Ok(())
}

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("reports serialize"));
}

fn gadget_kind(a: &Arena, game: Game) -> Result<GadgetKind, Failure> {
    match (game, a.fairness_side()) {
        (_, None) => Err(Failure { code: EXIT_INPUT, msg: "arena has no fair edges".into() }),
        (Game::Mp, Some(Owner::P1)) => Ok(GadgetKind::FairMp1),
        (Game::Mp, Some(Owner::P2)) => Ok(GadgetKind::FairMp2),
        (Game::Energy, Some(Owner::P1)) => Ok(GadgetKind::FairEnergy1),
        (Game::Energy, Some(Owner::P2)) => Err(Error::NoGadget.into()),
    }
}

fn machine_for(
    a: &Arena,
    spec: &FairObjectiveSpec,
    player: Owner,
    file: &Option<PathBuf>,
    epsilon: Rational,
) -> Result<StrategyMachine, Failure> {
    match file {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure { code: EXIT_INPUT, msg: format!("{}: {e}", path.display()) })?;
            let m = StrategyMachine::parse(a, &text)?;
            if m.owner() != player {
                return Err(Failure { code: EXIT_INPUT, msg: format!("{} holds a machine for {}", path.display(), m.owner()) });
            }
            Ok(m)
        }
        None => Ok(synthesize(a, spec, player)?.machine(epsilon)?),
    }
}

fn schedule_text(a: &Arena, s: &fairgame_core::EscalatingSchedule) -> String {
    let mut out = format!("schedule {} threshold {}\n", s.owner().token(), s.threshold);
    for rule in &s.rules {
        let fair: Vec<&str> = rule.fair.iter().map(|&f| a.name(f)).collect();
        out.push_str(&format!("round at {} prefer {} fair {}\n", a.name(rule.node), a.name(rule.preferred), fair.join(" ")));
    }
    for q in a.nodes().filter(|q| s.rule(*q).is_none()) {
        if let Some(succ) = s.base.first_move(q) {
            out.push_str(&format!("state 0 at {} -> {} next 0\n", a.name(q), a.name(succ)));
        }
    }
    out
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Solve { objective, json, dot, arena } => {
            let a = load(&arena)?;
            write_dot(&dot, &a)?;
            let report = solve(&a, &objective.spec(&a))?;
            let out = Report::from_regions(&a, &report.regions, report.route.clone(), check_determinacy(&report).to_string());
            if json {
                print_json(&out);
            } else {
                print!("{}", out.table(&a));
            }
        }
        Command::Value { json, arena } => {
            let a = load(&arena)?;
            let route = match a.fairness_side() {
                Some(Owner::P1) => "1-fair mean-payoff values".to_string(),
                Some(Owner::P2) => "2-fair mean-payoff values".to_string(),
                None => "regular mean-payoff values".to_string(),
            };
            let out = Report::from_values(&a, &values(&a)?, route);
            if json {
                print_json(&out);
            } else {
                print!("{}", out.table(&a));
            }
        }
        Command::Gadget { game, dot, arena } => {
            let a = load(&arena)?;
            let (g, _) = build_gadget(&a, gadget_kind(&a, game)?)?;
            write_dot(&dot, &g)?;
            print!("{}", g.to_text());
        }
        Command::Strategy { objective, player, epsilon, json, arena } => {
            let a = load(&arena)?;
            let s = synthesize(&a, &objective.spec(&a), player)?;
            let region: Vec<&str> = s.region.iter().map(|&q| a.name(q)).collect();
            let (kind, text) = match (&s.strategy, epsilon) {
                (SynthesizedStrategy::Machine(m), _) => ("machine", m.to_text(&a)),
                (SynthesizedStrategy::Schedule(sched), Some(eps)) => ("machine", sched.finitize(eps)?.to_text(&a)),
                (SynthesizedStrategy::Schedule(sched), None) => ("schedule", schedule_text(&a, sched)),
            };
            if json {
                print_json(&json!({ "player": player.token(), "region": region, "kind": kind, "strategy": text }));
            } else {
                println!("# {player} wins from {{{}}}", region.join(", "));
                print!("{text}");
            }
        }
        Command::Simulate { objective, start, p1, p2, epsilon, steps, json, arena } => {
            let a = load(&arena)?;
            let q = a.node_by_name(&start).ok_or_else(|| usage(format!("unknown start node `{start}`")))?;
            let spec = objective.spec(&a);
            let m1 = machine_for(&a, &spec, Owner::P1, &p1, epsilon)?;
            let m2 = machine_for(&a, &spec, Owner::P2, &p2, epsilon)?;
            let lasso = match steps {
                Some(n) => simulate_bounded(&a, &m1, &m2, q, n)?,
                None => simulate(&a, &m1, &m2, q)?,
            };
            let out = LassoReport::new(&a, &lasso);
            if json {
                print_json(&out);
            } else {
                print!("{}", out.table());
            }
        }
        Command::Gen { nodes, max_weight, fair, density, seed } => {
            if nodes == 0 {
                return Err(usage("--nodes must be positive"));
            }
            if !(0.0..=1.0).contains(&density) {
                return Err(usage("--density must lie in [0, 1]"));
            }
            let fair = match fair {
                Fair::P1 => Some(Owner::P1),
                Fair::P2 => Some(Owner::P2),
                Fair::None => None,
            };
            let a = random_arena(&GenParams { nodes, max_weight, fair, density, seed });
            if let Some(v) = validate(&a).first() {
                return Err(Failure { code: EXIT_DISAGREEMENT, msg: format!("generated arena is invalid: {v:?}") });
            }
            print!("{}", a.to_text());
        }
        Command::Oracle { objective, json, arena } => {
            let a = load(&arena)?;
            let spec = objective.spec(&a);
            let budget = OracleBudget::default();
            let mut oracle = oracle_fair(&a, &spec, &budget)?;
            let mut solver = solve(&a, &spec)?.regions;
            if spec.game == GameKind::MeanPayoff {
                let (want, got) = match a.fairness_side() {
                    Some(side) => (oracle_fair_values(&a, side, &budget)?, values(&a)?),
                    None => (oracle_values(&a, &budget)?, values(&a)?),
                };
                oracle.value = a.nodes().zip(want).collect();
                solver.value = got.to_map();
            }
            let mut disagreements = Vec::new();
            for q in a.nodes() {
                let region = |r: &fairgame_core::WinRegions| {
                    if r.win1.contains(&q) {
                        "win1"
                    } else if r.win2.contains(&q) {
                        "win2"
                    } else {
                        "undetermined"
                    }
                };
                if region(&oracle) != region(&solver) {
                    disagreements.push(format!("{}: oracle {}, solver {}", a.name(q), region(&oracle), region(&solver)));
                }
                if !oracle.credit.is_empty() && oracle.credit.get(&q) != solver.credit.get(&q) {
                    disagreements.push(format!("{}: oracle credit {:?}, solver credit {:?}", a.name(q), oracle.credit.get(&q), solver.credit.get(&q)));
                }
                if oracle.value.get(&q) != solver.value.get(&q) {
                    disagreements.push(format!("{}: oracle value {:?}, solver value {:?}", a.name(q), oracle.value.get(&q), solver.value.get(&q)));
                }
            }
            let route = "brute-force enumeration".to_string();
            let determinacy = if oracle.undetermined.is_empty() { "determined" } else { "not determined" };
            let out = Report::from_regions(&a, &oracle, route, determinacy.to_string());
            if json {
                print_json(&json!({ "oracle": out, "disagreements": disagreements }));
            } else {
                print!("{}", out.table(&a));
                for d in &disagreements {
                    println!("disagreement: {d}");
                }
            }
            if !disagreements.is_empty() {
                return Err(Failure { code: EXIT_DISAGREEMENT, msg: format!("{} disagreement(s) with the solver", disagreements.len()) });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("fairgame: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

