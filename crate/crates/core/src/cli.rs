//! Command-line front end: argument parsing, subcommands and report output.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::classical::{
    best_deterministic_triangle, best_edge_restricted_affine, nonlocal_perfect_strategy,
};
use crate::error::{Result, SptoError};
use crate::game::{check_win, input_patterns, GameInstance, Transcript};
use crate::group::{CocycleTable, GroupElement};
use crate::lightcone::{
    broadcast_circuit, find_failing_instance, generate_hard_instances, local_circuit,
    perfect_nonlocal_circuit, random_layered_circuit, BooleanCircuit, GridInstance, HardFamily,
    SearchOutcome,
};
use crate::linalg;
use crate::mps::builtin::{
    aklt_fixed_point, aklt_isometry, aklt_symmetry, aklt_tensor, builtin_tensor,
};
use crate::mps::order::{
    aklt_string_order_closed_form, aklt_string_order_limit, aklt_win_probability_limit,
};
use crate::mps::transfer::spectrum;
use crate::mps::{
    boundary_operators, correlation_length, dense_expectation, dense_state, expectation_chain,
    string_order, twisted_string_order, win_probability_bound, BoundaryOperatorPair, MpsTensor,
    Normalization, SiteOperator, SymmetryData, DEFAULT_DENSE_CAP,
};
use crate::stabilizer::{cluster_contexts, cluster_state, play_rounds};

pub const DEFAULT_SEED: u64 = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "spto",
    version,
    about = "Triangle game, SPT string order and shallow-circuit experiments"
)]
pub struct RunConfig {
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Play the triangle game with one strategy and report per-input win rates.
    Play(PlayArgs),
    /// String and twisted string order sweeps over chain length.
    Order(OrderArgs),
    /// Light-cone statistics and a failing-instance search for a circuit.
    Separate(SeparateArgs),
    /// Emit hard grid instances as JSON lines (or CSV).
    GenInstances(GenArgs),
    /// Run quick invariant checks across all modules.
    Verify,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    QuantumCluster,
    ClassicalBest,
    ClassicalNonlocal,
    AkltAnalytic,
}

#[derive(Debug, clap::Args)]
pub struct PlayArgs {
    #[arg(long, value_enum)]
    pub strategy: StrategyName,
    /// Players on the cycle.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Corner players as `alpha,beta,gamma` (default: evenly spaced).
    #[arg(long)]
    pub corners: Option<String>,
    /// Game instance JSON; overrides `--n` and `--corners`.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub rounds: usize,
    /// Chain length for `aklt-analytic`.
    #[arg(long, default_value_t = 100)]
    pub sites: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    String,
    Twisted,
    Xi,
    Win,
    Spectrum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    Canonical,
    Finite,
}

#[derive(Debug, clap::Args)]
pub struct OrderArgs {
    /// Built-in name (aklt, aklt_fixed_point, cluster_fixed_point) or tensor JSON path.
    #[arg(long, default_value = "aklt")]
    pub tensor: String,
    /// Symmetry JSON, required for tensor files.
    #[arg(long)]
    pub symmetry: Option<PathBuf>,
    /// Sites per boundary block for tensor files.
    #[arg(long, default_value_t = 1)]
    pub block: usize,
    /// String element: e, x, y, z or an index 0..3.
    #[arg(long, default_value = "z")]
    pub g: String,
    /// Twist element for the twisted string order.
    #[arg(long)]
    pub h: Option<String>,
    /// Chain lengths, `6..20` (inclusive) or a single value.
    #[arg(long = "N", default_value = "6..20")]
    pub lengths: String,
    #[arg(long, value_enum, value_delimiter = ',')]
    pub report: Vec<Quantity>,
    #[arg(long, value_enum, default_value_t = NormArg::Canonical)]
    pub normalization: NormArg,
}

#[derive(Debug, clap::Args)]
pub struct SeparateArgs {
    /// Circuit JSON path, or `builtin:local-D`, `builtin:broadcast`, `builtin:nonlocal`.
    #[arg(long)]
    pub circuit: String,
    #[arg(long = "N", default_value_t = 27)]
    pub n: usize,
    /// Instances drawn from the hard family.
    #[arg(long, default_value_t = 10_000)]
    pub budget: usize,
    /// JSON-lines instance file to search instead of the sampled family.
    #[arg(long)]
    pub instances: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct GenArgs {
    #[arg(long = "N", default_value_t = 27)]
    pub n: usize,
    #[arg(long, default_value_t = 64)]
    pub budget: usize,
}

/// A report in canonical JSON form plus its CSV projection.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    /// JSON lines instead of one document.
    pub lines: Option<Vec<Value>>,
    /// Whether the run counts as a success.
    pub ok: bool,
}

impl Report {
    fn new(json: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Report {
        Report {
            json,
            header,
            rows,
            lines: None,
            ok: true,
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => match &self.lines {
                Some(lines) => Ok(lines.iter().map(|v| v.to_string() + "\n").collect()),
                None => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            },
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.header).map_err(csv_err)?;
                for row in &self.rows {
                    w.write_record(row).map_err(csv_err)?;
                }
                let bytes = w.into_inner().map_err(|e| SptoError::Io(e.into_error()))?;
                Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
            }
        }
    }
}

fn csv_err(e: csv::Error) -> SptoError {
    SptoError::Io(std::io::Error::other(e))
}

/// Independent seed for one labelled stream of the run.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(2 * index as u128);
    rng.next_u64()
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| SptoError::InvalidInstance(format!("cannot read {}: {e}", path.display())))
}

fn fmt_bits(x: [u8; 3]) -> String {
    x.iter().map(|b| b.to_string()).collect()
}

fn parse_corners(s: &str) -> Result<[usize; 3]> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| SptoError::InvalidInstance(format!("corners '{s}': {e}")))?;
    parts
        .try_into()
        .map_err(|_| SptoError::InvalidInstance(format!("corners '{s}' must list three players")))
}

fn default_corners(n: usize) -> [usize; 3] {
    [0, n / 3, 2 * n / 3]
}

/// Parses `e`, `x`, `y`, `z` (AKLT axes) or an index `0..3`.
pub fn parse_element(s: &str) -> Result<GroupElement> {
    let idx = match s {
        "e" => 0,
        "x" => 1,
        "z" => 2,
        "y" => 3,
        other => other
            .parse::<usize>()
            .ok()
            .filter(|&i| i < 4)
            .ok_or_else(|| SptoError::NotInGroup(other.to_string()))?,
    };
    Ok(GroupElement::z2z2((idx >> 1) as u32, (idx & 1) as u32))
}

fn element_label(g: &GroupElement) -> &'static str {
    ["e", "x", "z", "y"][g.index()]
}

fn parse_lengths(s: &str) -> Result<Vec<usize>> {
    let bad = || SptoError::OutOfRange(format!("chain lengths '{s}'"));
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
    let v: Vec<usize> = match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            (a..=b).collect()
        }
        None => vec![parse(s)?],
    };
    if v.is_empty() {
        return Err(bad());
    }
    Ok(v)
}

fn play_instance(args: &PlayArgs) -> Result<GameInstance> {
    if let Some(path) = &args.instance {
        return GameInstance::from_json(&read_file(path)?);
    }
    let corners = match &args.corners {
        Some(s) => parse_corners(s)?,
        None => default_corners(args.n),
    };
    GameInstance::with_corner_bits(args.n, corners, [0; 3])
}

pub fn cmd_play(cfg: &RunConfig, args: &PlayArgs) -> Result<Report> {
    if args.strategy == StrategyName::AkltAnalytic {
        return aklt_analytic(args.sites);
    }
    let base = play_instance(args)?;
    if args.rounds == 0 {
        return Err(SptoError::OutOfRange("rounds must be positive".into()));
    }
    let rounds = args.rounds;
    let name = args
        .strategy
        .to_possible_value()
        .expect("named variant")
        .get_name()
        .to_string();
    let deterministic: Option<Box<dyn Fn(&GameInstance, [u8; 3]) -> Result<Transcript>>> =
        match args.strategy {
            StrategyName::ClassicalBest if base.n == 3 => {
                let best = best_deterministic_triangle().witness;
                Some(Box::new(move |inst: &GameInstance, _| {
                    Ok(best.transcript(inst))
                }))
            }
            StrategyName::ClassicalBest => {
                let best = best_edge_restricted_affine(base.n, base.corners)?.witness;
                Some(Box::new(move |inst: &GameInstance, _| {
                    best.transcript(inst)
                }))
            }
            StrategyName::ClassicalNonlocal => Some(Box::new(nonlocal_perfect_strategy)),
            _ => None,
        };
    let contexts = cluster_contexts();
    let mut per_input = Vec::new();
    let mut rows = Vec::new();
    let mut total_wins = 0usize;
    for (i, x) in input_patterns().into_iter().enumerate() {
        let inst = GameInstance::with_corner_bits(base.n, base.corners, x)?;
        let wins = match &deterministic {
            Some(f) => {
                if check_win(&inst, &f(&inst, x)?)?.win {
                    rounds
                } else {
                    0
                }
            }
            None => {
                let seeds: Vec<u64> = (0..rounds as u64)
                    .map(|r| derive_seed(cfg.seed, i as u64, r))
                    .collect();
                let transcripts = play_rounds(&inst, &contexts, &seeds)?;
                let mut wins = 0;
                for t in &transcripts {
                    wins += check_win(&inst, t)?.win as usize;
                }
                wins
            }
        };
        total_wins += wins;
        let rate = wins as f64 / rounds as f64;
        per_input
            .push(json!({ "x": fmt_bits(x), "rounds": rounds, "wins": wins, "win_rate": rate }));
        rows.push(vec![
            fmt_bits(x),
            rounds.to_string(),
            wins.to_string(),
            rate.to_string(),
        ]);
    }
    let overall = total_wins as f64 / (8 * rounds) as f64;
    let json = json!({
        "command": "play",
        "strategy": name,
        "n": base.n,
        "corners": base.corners,
        "rounds": rounds,
        "seed": cfg.seed,
        "inputs": per_input,
        "win_rate": overall,
    });
    Ok(Report::new(
        json,
        vec!["x", "rounds", "wins", "win_rate"],
        rows,
    ))
}

fn aklt_analytic(sites: usize) -> Result<Report> {
    if sites < 6 {
        return Err(SptoError::OutOfRange(format!(
            "aklt-analytic needs at least 6 sites, got {sites}"
        )));
    }
    let b = builtin_tensor("aklt")?;
    let mut orders = serde_json::Map::new();
    let mut s_min = f64::INFINITY;
    for g in 1..4 {
        let el = b.symmetry.group.element_at(g);
        let s = string_order(
            &b.tensor,
            &b.symmetry,
            &b.boundary_pair(g)?,
            &el,
            0,
            sites - 2,
            sites,
            Normalization::Canonical,
        )?;
        orders.insert(element_label(&el).to_string(), json!(s.re));
        s_min = s_min.min(s.re);
    }
    let p = win_probability_bound(s_min.clamp(-1.0, 1.0))?;
    let json = json!({
        "command": "play",
        "strategy": "aklt-analytic",
        "sites": sites,
        "string_order": orders,
        "string_order_min": s_min,
        "win_probability": p,
        "win_probability_limit": aklt_win_probability_limit(),
    });
    let rows = vec![
        vec!["string_order_min".into(), s_min.to_string()],
        vec!["win_probability".into(), p.to_string()],
        vec![
            "win_probability_limit".into(),
            aklt_win_probability_limit().to_string(),
        ],
    ];
    Ok(Report::new(json, vec!["quantity", "value"], rows))
}

struct OrderSource {
    name: String,
    tensor: MpsTensor,
    symmetry: SymmetryData,
    bounds: Box<dyn Fn(usize) -> Result<BoundaryOperatorPair>>,
}

fn order_source(args: &OrderArgs) -> Result<OrderSource> {
    if let Ok(b) = builtin_tensor(&args.tensor) {
        let name = b.name.to_string();
        let (tensor, symmetry) = (b.tensor.clone(), b.symmetry.clone());
        return Ok(OrderSource {
            name,
            tensor,
            symmetry,
            bounds: Box::new(move |g| b.boundary_pair(g)),
        });
    }
    let path = Path::new(&args.tensor);
    if !path.exists() {
        return Err(SptoError::UnknownTensor(args.tensor.clone()));
    }
    let tensor = MpsTensor::from_json(&read_file(path)?)?;
    let sym_path = args.symmetry.as_ref().ok_or_else(|| {
        SptoError::InvalidInstance("--symmetry is required with a tensor file".into())
    })?;
    let symmetry = SymmetryData::from_json(&read_file(sym_path)?)?;
    symmetry.validate(&tensor)?;
    let (t, v, l) = (tensor.clone(), symmetry.v.clone(), args.block);
    Ok(OrderSource {
        name: args.tensor.clone(),
        tensor,
        symmetry,
        bounds: Box::new(move |g| boundary_operators(&t, l, &v[g])),
    })
}

fn value_json(z: num_complex::Complex64) -> Value {
    if z.im.abs() < 1e-14 {
        json!(z.re)
    } else {
        json!([z.re, z.im])
    }
}

pub fn cmd_order(args: &OrderArgs) -> Result<Report> {
    let src = order_source(args)?;
    let g = parse_element(&args.g)?;
    let h = args.h.as_deref().map(parse_element).transpose()?;
    let lengths = parse_lengths(&args.lengths)?;
    let norm = match args.normalization {
        NormArg::Canonical => Normalization::Canonical,
        NormArg::Finite => Normalization::Finite,
    };
    let mut wanted = args.report.clone();
    if wanted.is_empty() {
        wanted = vec![Quantity::String, Quantity::Win, Quantity::Xi];
        if h.is_some() {
            wanted.insert(1, Quantity::Twisted);
        }
    }
    let gi = src.symmetry.group.index_of(&g)?;
    let bounds = (src.bounds)(gi)?;
    let d = src.tensor.d();
    let l = crate::mps::transfer::support_len(bounds.vl.nrows(), d)
        .ok_or_else(|| SptoError::Dimension("boundary operator size".into()))?;
    let mut records = Vec::new();
    let mut rows = Vec::new();
    let gl = element_label(&g);
    let hl = h.as_ref().map(element_label).unwrap_or("");
    let mut push = |quantity: &str, n: Option<usize>, z: num_complex::Complex64| {
        let mut params = json!({ "tensor": src.name, "g": gl });
        if let Some(n) = n {
            params["N"] = json!(n);
        }
        if h.is_some() {
            params["h"] = json!(hl);
        }
        records.push(json!({ "quantity": quantity, "params": params, "value": value_json(z) }));
        rows.push(vec![
            quantity.to_string(),
            src.name.clone(),
            n.map(|n| n.to_string()).unwrap_or_default(),
            gl.to_string(),
            hl.to_string(),
            z.re.to_string(),
            z.im.to_string(),
        ]);
    };
    for &n in &lengths {
        if n < 2 * l {
            return Err(SptoError::OutOfRange(format!(
                "N={n} is shorter than two boundary blocks of {l} sites"
            )));
        }
        let k = n - l;
        let s = string_order(&src.tensor, &src.symmetry, &bounds, &g, 0, k, n, norm)?;
        if wanted.contains(&Quantity::String) {
            push("string_order", Some(n), s);
        }
        if wanted.contains(&Quantity::Twisted) {
            let h = h
                .as_ref()
                .ok_or_else(|| SptoError::NotInGroup("--h is required for twisted".into()))?;
            let t =
                twisted_string_order(&src.tensor, &src.symmetry, &bounds, &g, h, 0, k, n, norm)?;
            push("twisted_string_order", Some(n), t);
        }
        if wanted.contains(&Quantity::Win) {
            let p = win_probability_bound(s.re.clamp(-1.0, 1.0))?;
            push("win_bound", Some(n), linalg::r(p));
        }
    }
    if wanted.contains(&Quantity::Xi) {
        push(
            "correlation_length",
            None,
            linalg::r(correlation_length(&src.tensor)?),
        );
    }
    if wanted.contains(&Quantity::Spectrum) {
        for z in spectrum(&src.tensor) {
            push("transfer_eigenvalue", None, z);
        }
    }
    let json = json!({ "command": "order", "normalization": format!("{:?}", norm).to_lowercase(), "records": records });
    Ok(Report::new(
        json,
        vec!["quantity", "tensor", "N", "g", "h", "re", "im"],
        rows,
    ))
}

/// Circuit plus, for instance-wired circuits, the instance it is wired to.
fn load_circuit(
    source: &str,
    n: usize,
    seed: u64,
) -> Result<(BooleanCircuit, Option<GridInstance>)> {
    let plain = |c: Result<BooleanCircuit>| c.map(|c| (c, None));
    match source.strip_prefix("builtin:") {
        Some("broadcast") => plain(broadcast_circuit(n, 2)),
        Some("nonlocal") => {
            let first = HardFamily::standard(n)?.geometry(0)?;
            Ok((perfect_nonlocal_circuit(&first)?, Some(first)))
        }
        Some(other) => {
            let depth = other
                .strip_prefix("local-")
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| {
                    SptoError::InvalidCircuit(format!("unknown builtin circuit '{other}'"))
                })?;
            plain(local_circuit(n, depth, seed))
        }
        None => plain(BooleanCircuit::from_json(&read_file(Path::new(source))?)),
    }
}

pub fn cmd_separate(cfg: &RunConfig, args: &SeparateArgs) -> Result<Report> {
    let (circuit, wired) = load_circuit(&args.circuit, args.n, derive_seed(cfg.seed, 100, 0))?;
    if circuit.inputs != args.n * args.n {
        return Err(SptoError::InvalidCircuit(format!(
            "circuit has {} inputs but the {}x{} grid has {}",
            circuit.inputs,
            args.n,
            args.n,
            args.n * args.n
        )));
    }
    let (max_cone, bound) = circuit.backward_cone_stats();
    let shallow_limit = 0.4 * (args.n as f64).ln() / (circuit.k.max(2) as f64).ln();
    let (stream, source) = match (&args.instances, wired) {
        (Some(path), _) => (read_instances(path)?, "file"),
        (None, Some(inst)) => (inst.family(), "wired"),
        (None, None) => (
            generate_hard_instances(args.n, args.budget, derive_seed(cfg.seed, 101, 0))?,
            "sampled",
        ),
    };
    if let Some(bad) = stream.iter().find(|i| i.n != args.n) {
        return Err(SptoError::InvalidInstance(format!(
            "instance on a {0}x{0} grid, expected N={1}",
            bad.n, args.n
        )));
    }
    let report = find_failing_instance(&circuit, stream, derive_seed(cfg.seed, 102, 0))?;
    let cone_stats = json!({
        "max_backward_cone": max_cone,
        "bound": bound.to_string(),
        "within_bound": (max_cone as u128) <= bound,
        "depth": circuit.depth(),
        "K": circuit.k,
        "shallow_depth_limit": shallow_limit,
    });
    let (found, position, x, reason) = match &report.outcome {
        SearchOutcome::Witness(w) => (
            true,
            w.position.to_string(),
            fmt_bits(w.instance.x),
            String::new(),
        ),
        SearchOutcome::Exhausted { reason } => {
            (false, String::new(), String::new(), reason.clone())
        }
    };
    let json = json!({
        "command": "separate",
        "N": args.n,
        "budget": args.budget,
        "instances": source,
        "seed": cfg.seed,
        "circuit": { "K": circuit.k, "depth": circuit.depth(), "gates": circuit.gate_count() },
        "cone_stats": cone_stats,
        "search": serde_json::to_value(&report)?,
    });
    let row = vec![
        args.n.to_string(),
        args.budget.to_string(),
        circuit.k.to_string(),
        circuit.depth().to_string(),
        max_cone.to_string(),
        bound.to_string(),
        found.to_string(),
        position,
        x,
        report.stats.examined.to_string(),
        report.stats.cones_overlap.to_string(),
        report.stats.edge_reached.to_string(),
        reason,
    ];
    let header = vec![
        "N",
        "budget",
        "K",
        "depth",
        "max_backward_cone",
        "bound",
        "witness",
        "position",
        "losing_x",
        "examined",
        "cones_overlap",
        "edge_reached",
        "reason",
    ];
    let mut r = Report::new(json, header, vec![row]);
    r.ok = report.stats.unexplained_wins == 0 && (max_cone as u128) <= bound;
    Ok(r)
}

fn read_instances(path: &Path) -> Result<Vec<GridInstance>> {
    read_file(path)?
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(GridInstance::from_json)
        .collect()
}

pub fn cmd_gen_instances(cfg: &RunConfig, args: &GenArgs) -> Result<Report> {
    let instances = generate_hard_instances(args.n, args.budget, derive_seed(cfg.seed, 101, 0))?;
    let rows = instances
        .iter()
        .map(|i| {
            let cycle: Vec<String> = i.cycle.iter().map(|v| v.to_string()).collect();
            vec![
                i.n.to_string(),
                i.corners[0].to_string(),
                i.corners[1].to_string(),
                i.corners[2].to_string(),
                fmt_bits(i.x),
                i.cycle.len().to_string(),
                cycle.join(" "),
            ]
        })
        .collect();
    let lines: Vec<Value> = instances
        .iter()
        .map(serde_json::to_value)
        .collect::<std::result::Result<_, _>>()?;
    let mut r = Report::new(
        Value::Null,
        vec!["N", "alpha", "beta", "gamma", "x", "length", "cycle"],
        rows,
    );
    r.lines = Some(lines);
    Ok(r)
}

fn check(name: &str, pass: bool, detail: String) -> (String, bool, String) {
    (name.to_string(), pass, detail)
}

/// Quick versions of the invariant suites.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Report> {
    let mut checks = Vec::new();

    let best = best_deterministic_triangle();
    checks.push(check(
        "classical optimum is 7/8",
        best.won == 7,
        best.max_win_fraction(),
    ));

    let contexts = cluster_contexts();
    let mut all_won = true;
    for n in [3usize, 10] {
        for (i, x) in input_patterns().into_iter().enumerate() {
            let inst = GameInstance::with_corner_bits(n, default_corners(n), x)?;
            let seeds: Vec<u64> = (0..50)
                .map(|r| derive_seed(cfg.seed, (n * 8 + i) as u64, r))
                .collect();
            for t in play_rounds(&inst, &contexts, &seeds)? {
                all_won &= check_win(&inst, &t)?.win;
            }
        }
    }
    checks.push(check(
        "cluster strategy wins every round",
        all_won,
        "n in {3, 10}, 50 rounds per input".into(),
    ));

    let aklt = builtin_tensor("aklt")?;
    let bz = aklt.boundary_pair(2)?;
    let z = parse_element("z")?;
    let mut worst: f64 = 0.0;
    for n in 6..=12 {
        let s = string_order(
            &aklt.tensor,
            &aklt.symmetry,
            &bz,
            &z,
            0,
            n - 2,
            n,
            Normalization::Canonical,
        )?;
        worst = worst.max((s - linalg::r(aklt_string_order_closed_form(n))).norm());
    }
    checks.push(check(
        "AKLT string order closed form",
        worst < 1e-12,
        format!("max deviation {worst:e}"),
    ));
    checks.push(check(
        "AKLT string order limit",
        (aklt_string_order_limit() - 0.9776769862287759).abs() < 1e-15,
        format!("{}", aklt_string_order_limit()),
    ));

    let ev = spectrum(&aklt_tensor());
    let moduli_ok = (ev[0] - linalg::ONE).norm() < 1e-12
        && ev[1..].iter().all(|z| (z.norm() - 1.0 / 3.0).abs() < 1e-12);
    let xi = correlation_length(&aklt_tensor())?;
    checks.push(check(
        "AKLT transfer spectrum and correlation length",
        moduli_ok && (xi - 1.0 / 3f64.ln()).abs() < 1e-12,
        format!(
            "eigenvalues {:?}, xi {xi}",
            ev.iter().map(|z| z.re).collect::<Vec<_>>()
        ),
    ));

    let table = CocycleTable::pauli_z2z2();
    let mut twist_ok = true;
    for g in 0..4usize {
        for h in 0..4usize {
            let (ge, he) = (
                GroupElement::z2z2((g >> 1) as u32, (g & 1) as u32),
                GroupElement::z2z2((h >> 1) as u32, (h & 1) as u32),
            );
            let expect = if ((g >> 1) * (h & 1) + (g & 1) * (h >> 1)) % 2 == 1 {
                -1.0
            } else {
                1.0
            };
            twist_ok &=
                (table.twist_phase(&ge, &he)?.to_complex() - linalg::r(expect)).norm() < 1e-12;
        }
    }
    checks.push(check(
        "twist phases are (-1)^(ad+bc)",
        twist_ok,
        "16 pairs".into(),
    ));

    let a = aklt_tensor();
    let psi = dense_state(&a, 8, DEFAULT_DENSE_CAP)?;
    let sym = aklt_symmetry();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, 200, 0));
    let mut dev: f64 = 0.0;
    for _ in 0..10 {
        let p1 = (rng.next_u32() % 8) as usize;
        let p2 = (p1 + 1 + (rng.next_u32() % 6) as usize) % 8;
        let (o1, o2) = (
            sym.u[1 + (rng.next_u32() % 3) as usize].clone(),
            sym.u[1 + (rng.next_u32() % 3) as usize].clone(),
        );
        let ops = [
            SiteOperator::new(p1, o1.clone()),
            SiteOperator::new(p2, o2.clone()),
        ];
        let chain = expectation_chain(&a, &ops, 8, Normalization::Finite)?;
        let dense = dense_expectation(&psi, 3, 8, &[(p1, o1), (p2, o2)])?;
        dev = dev.max((chain - dense).norm());
    }
    checks.push(check(
        "transfer chain matches dense contraction",
        dev < 1e-10,
        format!("max deviation {dev:e}"),
    ));

    let mut cones_ok = true;
    for i in 0..20u64 {
        let c = random_layered_circuit(
            32,
            2 + (i % 2) as usize,
            1 + (i % 4) as usize,
            16,
            derive_seed(cfg.seed, 300, i),
        )?;
        let (max, bound) = c.backward_cone_stats();
        cones_ok &= (max as u128) <= bound;
    }
    checks.push(check(
        "backward cones are at most K^D",
        cones_ok,
        "20 random circuits".into(),
    ));

    let local = local_circuit(27, 2, derive_seed(cfg.seed, 100, 0))?;
    let search = find_failing_instance(
        &local,
        generate_hard_instances(27, 10_000, derive_seed(cfg.seed, 101, 0))?,
        0,
    )?;
    let witness_ok =
        search.witness().is_some_and(|w| !w.verdict.win) && search.stats.unexplained_wins == 0;
    checks.push(check(
        "depth-2 local circuit loses a hard instance",
        witness_ok,
        format!("{} geometries examined", search.stats.examined),
    ));

    let pi = aklt_isometry();
    let mut overlap_ok = true;
    for n in 2..=4 {
        let phi =
            linalg::kron_pow(&pi, n) * dense_state(&aklt_fixed_point(), n, DEFAULT_DENSE_CAP)?;
        let phi = &phi / linalg::r(phi.norm());
        let reference = cluster_state(2 * n, 0)?.state_vector();
        overlap_ok &= (phi.dotc(&reference).norm() - 1.0).abs() < 1e-10;
    }
    checks.push(check(
        "isometry maps AKLT fixed point to the cluster ring",
        overlap_ok,
        "N = 2..4 blocks".into(),
    ));

    let ok = checks.iter().all(|c| c.1);
    let json = json!({
        "command": "verify",
        "passed": ok,
        "checks": checks.iter().map(|(n, p, d)| json!({ "name": n, "pass": p, "detail": d })).collect::<Vec<_>>(),
    });
    let rows = checks
        .iter()
        .map(|(n, p, d)| vec![n.clone(), p.to_string(), d.clone()])
        .collect();
    let mut r = Report::new(json, vec!["check", "pass", "detail"], rows);
    r.ok = ok;
    Ok(r)
}

/// Runs one parsed command and returns the rendered report.
pub fn execute(cfg: &RunConfig) -> Result<(String, bool)> {
    if let Some(out) = &cfg.out {
        let parent = out
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."));
        if !parent.is_dir() {
            return Err(SptoError::InvalidInstance(format!(
                "output directory {} does not exist",
                parent.display()
            )));
        }
    }
    let report = match &cfg.command {
        Command::Play(a) => cmd_play(cfg, a)?,
        Command::Order(a) => cmd_order(a)?,
        Command::Separate(a) => cmd_separate(cfg, a)?,
        Command::GenInstances(a) => cmd_gen_instances(cfg, a)?,
        Command::Verify => cmd_verify(cfg)?,
    };
    Ok((report.render(cfg.format)?, report.ok))
}

/// Exit status for an error: 2 for I/O failures, 1 for everything else.
pub fn exit_code(e: &SptoError) -> i32 {
    match e {
        SptoError::Io(_) => 2,
        _ => 1,
    }
}

/// Parses arguments, runs, writes the report, and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    if cfg.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build_global()
        {
            log::warn!("could not size the thread pool: {e}");
        }
    }
    log::debug!("{cfg:?}");
    let (text, ok) = match execute(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    if ok {
        0
    } else {
        1
    }
}
