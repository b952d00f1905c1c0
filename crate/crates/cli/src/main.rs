mod render;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use gridcal::atlas::{atlas_verify, AtlasTable, Status};
use gridcal::census::{
    builtin_anchor, builtin_anchors, enumerate_all, enumerate_where, nonsimplifiable_census, Anchor, CensusError, KnotFilter,
};
use gridcal::exchange::{exchange_class, is_simplifiable, ExchangeError, DEFAULT_NODE_CAP};
use gridcal::invariants::{alexander_polynomial, classical_invariants, determinant};
use gridcal::search::{
    equiv_legendrian, equiv_transverse, find_middle, lambda_classes, pad, MiddleResult, SearchCaps, Verdict,
};
use gridcal::{enumerate_moves, text, Certificate, ContactSign, Diagram, MoveFilter, OrientedType, Quadrant};

#[derive(Parser)]
#[command(name = "gridcal", version, about = "Rectangular diagram calculus for Legendrian and transverse links")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Search caps as size:nodes:seconds.
    #[arg(long, global = true)]
    caps: Option<String>,
    /// Machine-readable output and errors.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a .grid file.
    Validate { file: PathBuf },
    /// Print the canonical key.
    Canon {
        file: PathBuf,
        /// Also minimise over component renumberings.
        #[arg(long)]
        unnumbered: bool,
    },
    /// Classical invariants.
    Invariants { file: PathBuf },
    /// List elementary moves, or take a random walk with `--walk`.
    Neighbors {
        file: PathBuf,
        #[arg(long, default_value = "all")]
        filter: String,
        /// Apply this many random filtered moves (seeded by --seed) and print the result.
        #[arg(long)]
        walk: Option<usize>,
    },
    /// Compute the exchange class.
    ExchangeClass {
        file: PathBuf,
        /// Write the class as JSONL.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: usize,
    },
    /// Does some member of the exchange class admit a destabilization?
    Simplifiable {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        node_cap: usize,
    },
    /// Legendrian equivalence search.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// plus or minus.
        #[arg(long, default_value = "plus")]
        contact: String,
        #[command(flatten)]
        out: EquivOut,
    },
    /// Transverse equivalence search.
    EquivTransverse {
        a: PathBuf,
        b: PathBuf,
        /// One of ++, +-, -+, --.
        #[arg(long, allow_hyphen_values = true)]
        quadrant: String,
        #[command(flatten)]
        out: EquivOut,
    },
    /// Search for a diagram with L+ of A and L- of B.
    FindMiddle {
        a: PathBuf,
        b: PathBuf,
        /// Write middle.grid, first.cert and second.cert here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Exchange classes with L+ of A and L- of B.
    Lambda {
        a: PathBuf,
        b: PathBuf,
        /// Symmetry group order; more certified classes is a contradiction.
        #[arg(long)]
        sym_order: Option<u64>,
    },
    /// Enumerate combinatorial types, or run the non-simplifiability census.
    Census {
        /// Largest grid size.
        #[arg(long)]
        n: usize,
        /// Comma-separated det=D, components=K, anchor=NAME|FILE.
        #[arg(long, default_value = "")]
        knot: String,
        #[arg(long)]
        nonsimplifiable: bool,
        /// Write JSONL records here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_NODE_CAP)]
        class_cap: usize,
    },
    /// Check an atlas table.
    AtlasVerify { table: PathBuf },
    /// Re-validate a certificate.
    Replay { cert: PathBuf },
    /// Draw a diagram as SVG.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EquivOut {
    /// Write the certificate here.
    #[arg(long)]
    cert: Option<PathBuf>,
    /// Stabilize both inputs first: component:type:count, e.g. 1:>I:2.
    #[arg(long, allow_hyphen_values = true)]
    pad: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Other,
    Parse,
    Caps,
    Verification,
}

impl Kind {
    fn code(self) -> u8 {
        match self {
            Kind::Other => 1,
            Kind::Parse => 2,
            Kind::Caps => 3,
            Kind::Verification => 4,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Kind::Other => "other",
            Kind::Parse => "parse",
            Kind::Caps => "caps",
            Kind::Verification => "verification",
        }
    }
}

struct CliError {
    kind: Kind,
    message: String,
}

fn err(kind: Kind, message: impl Into<String>) -> CliError {
    CliError { kind, message: message.into() }
}

/// Command result: human text, JSON, and the exit status.
struct Output {
    text: String,
    json: Value,
    kind: Option<Kind>,
}

impl Output {
    fn ok(text: String, json: Value) -> Output {
        Output { text, json, kind: None }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| err(Kind::Other, format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| err(Kind::Other, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Diagram, CliError> {
    text::parse(&read(path)?).map_err(|e| err(Kind::Parse, format!("{}: {e}", path.display())))
}

fn caps_for(cli: &Cli, n1: usize, n2: usize) -> Result<SearchCaps, CliError> {
    match &cli.caps {
        Some(s) => s.parse().map_err(|e: String| err(Kind::Parse, e)),
        None => Ok(SearchCaps::default_for(n1, n2)),
    }
}

fn big_json(v: &num_bigint::BigUint) -> Value {
    u64::try_from(v).map_or_else(|_| json!(v.to_string()), |x| json!(x))
}

fn parse_oriented(s: &str) -> Option<OrientedType> {
    OrientedType::from_label(s).or(match s.to_ascii_uppercase().as_str() {
        "RI" => Some(OrientedType::RightI),
        "LI" => Some(OrientedType::LeftI),
        "RII" => Some(OrientedType::RightII),
        "LII" => Some(OrientedType::LeftII),
        _ => None,
    })
}

fn apply_pads(d: &Diagram, pads: &[String]) -> Result<Diagram, CliError> {
    let mut cur = d.clone();
    for p in pads {
        let parts: Vec<&str> = p.split(':').collect();
        let bad = || err(Kind::Parse, format!("bad --pad {p:?}; expected component:type:count"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let k: usize = parts[0].parse().ok().filter(|&k| k >= 1).ok_or_else(bad)?;
        let t = parse_oriented(parts[1]).ok_or_else(bad)?;
        let count: usize = parts[2].parse().map_err(|_| bad())?;
        if k > cur.num_components() {
            return Err(err(Kind::Parse, format!("--pad {p:?}: no component {k}")));
        }
        cur = pad(&cur, k - 1, t, count).ok_or_else(|| err(Kind::Other, format!("--pad {p:?}: no such stabilization")))?;
    }
    Ok(cur)
}

fn verdict_output(v: &Verdict, cert_path: Option<&Path>, extra: Value) -> Result<Output, CliError> {
    let mut text = format!("verdict: {}\n", v.name());
    let mut j = json!({ "verdict": v.name() });
    let mut kind = None;
    match v {
        Verdict::Equivalent(c) => {
            c.replay().map_err(|e| err(Kind::Verification, format!("emitted certificate fails replay: {e}")))?;
            writeln!(text, "moves: {}", c.moves.len()).unwrap();
            j["moves"] = json!(c.moves.len());
            match cert_path {
                Some(p) => {
                    write(p, &c.to_string())?;
                    writeln!(text, "certificate: {}", p.display()).unwrap();
                    j["certificate_path"] = json!(p.display().to_string());
                }
                None => {
                    text.push_str(&c.to_string());
                    j["certificate"] = json!(c.to_string());
                }
            }
        }
        Verdict::Distinct(w) => {
            writeln!(text, "witness: {} {} vs {}", w.invariant, w.left, w.right).unwrap();
            j["witness"] = json!(w);
        }
        Verdict::DistinctWithinBound { max_grid_size, nodes } => {
            writeln!(text, "no chain within grid size {max_grid_size} ({nodes} nodes)").unwrap();
            j["max_grid_size"] = json!(max_grid_size);
            j["nodes"] = json!(nodes);
        }
        Verdict::Unknown(r) => {
            writeln!(text, "caps reached after {} nodes ({:?})", r.nodes, r.cap_hit).unwrap();
            j["report"] = json!(r);
            kind = Some(Kind::Caps);
        }
    }
    if let Value::Object(m) = extra {
        for (k, v) in m {
            writeln!(text, "{k}: {v}").unwrap();
            j[k] = v;
        }
    }
    Ok(Output { text, json: j, kind })
}

fn padded_pair(a: &Path, b: &Path, pads: &[String]) -> Result<(Diagram, Diagram, Value), CliError> {
    let (d1, d2) = (load(a)?, load(b)?);
    if pads.is_empty() {
        return Ok((d1, d2, json!({})));
    }
    let (p1, p2) = (apply_pads(&d1, pads)?, apply_pads(&d2, pads)?);
    let same = exchange_class(&p1, DEFAULT_NODE_CAP)
        .map(|c| c.contains(&p2.canonical_key()))
        .map_err(|ExchangeError::CapExceeded(n)| err(Kind::Caps, format!("exchange closure exceeded {n} keys")))?;
    Ok((p1, p2, json!({ "padded_exchange_class_match": same })))
}

fn parse_knot(text: &str) -> Result<KnotFilter, CliError> {
    let mut f = KnotFilter { components: 1, determinant: None, anchors: vec![] };
    let mut named = false;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| err(Kind::Parse, format!("bad --knot field {part:?}")))?;
        match k {
            "det" => f.determinant = Some(v.parse::<BigUint>().map_err(|_| err(Kind::Parse, format!("bad det {v:?}")))?),
            "components" => {
                f.components = v.parse().ok().filter(|&c| c >= 1).ok_or_else(|| err(Kind::Parse, format!("bad components {v:?}")))?
            }
            "anchor" => {
                named = true;
                let a = match builtin_anchor(v) {
                    Some(a) => a,
                    None => Anchor::new(v, load(Path::new(v))?),
                };
                f.anchors.push(a);
            }
            _ => return Err(err(Kind::Parse, format!("unknown --knot field {k:?}"))),
        }
    }
    if !named {
        f.anchors = builtin_anchors();
    }
    Ok(f)
}

fn census_error(e: CensusError) -> CliError {
    match e {
        CensusError::SizeOutOfRange(_) => err(Kind::Parse, e.to_string()),
        CensusError::CapExceeded { .. } => err(Kind::Caps, e.to_string()),
    }
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    if cli.caps.is_some() {
        caps_for(cli, 2, 2)?;
    }
    match &cli.cmd {
        Command::Validate { file } => {
            let d = load(file)?;
            Ok(Output::ok(
                format!("ok: grid {}, {} component(s)\n", d.n(), d.num_components()),
                json!({ "valid": true, "n": d.n(), "components": d.num_components() }),
            ))
        }
        Command::Canon { file, unnumbered } => {
            let d = load(file)?;
            let k = if *unnumbered { d.canonical_key_unnumbered() } else { d.canonical_key() };
            Ok(Output::ok(format!("{k}\n"), json!({ "key": k })))
        }
        Command::Invariants { file } => {
            let d = load(file)?;
            let inv = classical_invariants(&d);
            let alex: Vec<String> = alexander_polynomial(&d).iter().map(|c| c.to_string()).collect();
            let mut t = String::new();
            writeln!(t, "n {}", d.n()).unwrap();
            writeln!(t, "components {}", d.num_components()).unwrap();
            writeln!(t, "writhe {}", inv.writhe).unwrap();
            writeln!(t, "tb+ {} {:?}", inv.tb_plus, inv.tb_plus_components).unwrap();
            writeln!(t, "tb- {} {:?}", inv.tb_minus, inv.tb_minus_components).unwrap();
            writeln!(t, "rot+ {:?}", inv.rot_plus).unwrap();
            writeln!(t, "rot- {:?}", inv.rot_minus).unwrap();
            writeln!(t, "sl ++ {} +- {} -+ {} -- {}", inv.sl.pp, inv.sl.pm, inv.sl.mp, inv.sl.mm).unwrap();
            writeln!(t, "determinant {}", inv.determinant).unwrap();
            writeln!(t, "alexander [{}]", alex.join(", ")).unwrap();
            let mut j = serde_json::to_value(&inv).expect("invariants serialize");
            j["n"] = json!(d.n());
            j["components"] = json!(d.num_components());
            j["alexander"] = json!(alex);
            Ok(Output::ok(t, j))
        }
        Command::Neighbors { file, filter, walk } => {
            let d = load(file)?;
            let f: MoveFilter = filter.parse().map_err(|e| err(Kind::Parse, format!("{e}")))?;
            if let Some(steps) = walk {
                let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
                let mut cur = d;
                for _ in 0..*steps {
                    let moves = enumerate_moves(&cur, &f);
                    let Some((_, r)) = moves.choose(&mut rng) else { break };
                    cur = r.clone();
                }
                let t = text::encode(&cur);
                return Ok(Output::ok(t.clone(), json!({ "grid": t, "key": cur.canonical_key() })));
            }
            let mut t = String::new();
            let mut list = Vec::new();
            for (m, r) in enumerate_moves(&d, &f) {
                let k = r.canonical_key();
                writeln!(t, "{}\t{}", m.record(), k).unwrap();
                list.push(json!({
                    "record": m.record().to_string(),
                    "category": m.category().label(),
                    "component": m.component() + 1,
                    "key": k,
                }));
            }
            Ok(Output::ok(t, json!({ "moves": list })))
        }
        Command::ExchangeClass { file, out, node_cap } => {
            let d = load(file)?;
            let c = exchange_class(&d, *node_cap).map_err(|e| err(Kind::Caps, e.to_string()))?;
            if let Some(p) = out {
                write(p, &c.to_jsonl())?;
            }
            let j = json!({
                "representative": c.representative,
                "size": c.len(),
                "fingerprint": c.fingerprint(),
                "simplifiable": c.simplifiable,
            });
            Ok(Output::ok(
                format!(
                    "representative {}\nsize {}\nfingerprint {}\nsimplifiable {}\n",
                    c.representative,
                    c.len(),
                    c.fingerprint(),
                    c.simplifiable
                ),
                j,
            ))
        }
        Command::Simplifiable { file, node_cap } => {
            let d = load(file)?;
            let s = is_simplifiable(&d, *node_cap).map_err(|e| err(Kind::Caps, e.to_string()))?;
            Ok(Output::ok(format!("{}\n", if s { "simplifiable" } else { "non-simplifiable" }), json!({ "simplifiable": s })))
        }
        Command::Equiv { a, b, contact, out } => {
            let sign = match contact.as_str() {
                "plus" | "+" => ContactSign::Plus,
                "minus" | "-" => ContactSign::Minus,
                _ => return Err(err(Kind::Parse, format!("--contact must be plus or minus, got {contact:?}"))),
            };
            let (d1, d2, extra) = padded_pair(a, b, &out.pad)?;
            let caps = caps_for(cli, d1.n(), d2.n())?;
            verdict_output(&equiv_legendrian(&d1, &d2, sign, &caps), out.cert.as_deref(), extra)
        }
        Command::EquivTransverse { a, b, quadrant, out } => {
            let q = Quadrant::from_label(quadrant)
                .ok_or_else(|| err(Kind::Parse, format!("--quadrant must be ++, +-, -+ or --, got {quadrant:?}")))?;
            let (d1, d2, extra) = padded_pair(a, b, &out.pad)?;
            let caps = caps_for(cli, d1.n(), d2.n())?;
            verdict_output(&equiv_transverse(&d1, &d2, q, &caps), out.cert.as_deref(), extra)
        }
        Command::FindMiddle { a, b, out_dir } => {
            let (d1, d2) = (load(a)?, load(b)?);
            let caps = caps_for(cli, d1.n(), d2.n())?;
            match find_middle(&d1, &d2, &caps) {
                MiddleResult::Found(m) => {
                    for c in [&m.from_first, &m.from_second] {
                        c.replay().map_err(|e| err(Kind::Verification, format!("emitted certificate fails replay: {e}")))?;
                    }
                    let grid = text::encode(&m.diagram);
                    let mut t = format!("middle found, grid {}\n{grid}", m.diagram.n());
                    if let Some(dir) = out_dir {
                        std::fs::create_dir_all(dir).map_err(|e| err(Kind::Other, e.to_string()))?;
                        write(&dir.join("middle.grid"), &grid)?;
                        write(&dir.join("first.cert"), &m.from_first.to_string())?;
                        write(&dir.join("second.cert"), &m.from_second.to_string())?;
                        writeln!(t, "wrote {}", dir.display()).unwrap();
                    }
                    Ok(Output::ok(
                        t,
                        json!({
                            "found": true,
                            "grid": grid,
                            "key": m.diagram.canonical_key(),
                            "first_certificate": m.from_first.to_string(),
                            "second_certificate": m.from_second.to_string(),
                        }),
                    ))
                }
                MiddleResult::NoneWithinBound { max_grid_size, nodes } => Ok(Output::ok(
                    format!("no middle within grid size {max_grid_size} ({nodes} nodes)\n"),
                    json!({ "found": false, "max_grid_size": max_grid_size, "nodes": nodes }),
                )),
                MiddleResult::Unknown(r) => Ok(Output {
                    text: format!("caps reached after {} nodes ({:?})\n", r.nodes, r.cap_hit),
                    json: json!({ "found": false, "report": r }),
                    kind: Some(Kind::Caps),
                }),
            }
        }
        Command::Lambda { a, b, sym_order } => {
            let (d1, d2) = (load(a)?, load(b)?);
            let caps = caps_for(cli, d1.n(), d2.n())?;
            let rep = lambda_classes(&d1, &d2, &caps);
            let mut t = format!("grid size {:?}, exhaustive {}\n", rep.grid_size, rep.exhaustive_within_bound);
            let mut certified = Vec::new();
            for c in &rep.certified {
                writeln!(t, "certified {} {} size {}", c.fingerprint, c.representative, c.size).unwrap();
                certified.push(json!({ "fingerprint": c.fingerprint, "representative": c.representative, "size": c.size }));
            }
            let mut unknown = Vec::new();
            for c in &rep.unknown {
                writeln!(t, "unknown {} {} size {}", c.fingerprint, c.representative, c.size).unwrap();
                unknown.push(json!({ "fingerprint": c.fingerprint, "representative": c.representative, "size": c.size }));
            }
            let contradiction = sym_order.is_some_and(|k| rep.certified.len() as u64 > k);
            if contradiction {
                writeln!(t, "contradiction: {} certified classes exceed the symmetry order {}", rep.certified.len(), sym_order.unwrap())
                    .unwrap();
            }
            Ok(Output {
                text: t,
                json: json!({
                    "grid_size": rep.grid_size,
                    "exhaustive_within_bound": rep.exhaustive_within_bound,
                    "certified": certified,
                    "unknown": unknown,
                    "contradiction": contradiction,
                }),
                kind: contradiction.then_some(Kind::Verification),
            })
        }
        Command::Census { n, knot, nonsimplifiable, out, class_cap } => {
            let filter = parse_knot(knot)?;
            let caps = caps_for(cli, *n, *n)?;
            let (lines, summary, j) = if *nonsimplifiable {
                let r = nonsimplifiable_census(&filter, *n, *class_cap, &caps).map_err(census_error)?;
                let mut s = String::new();
                for st in &r.per_size {
                    writeln!(s, "n={} candidates={} nonsimplifiable={}", st.n, st.candidates, st.nonsimplifiable).unwrap();
                }
                for (b, c) in &r.buckets {
                    writeln!(s, "bucket {b}: {c}").unwrap();
                }
                writeln!(s, "verified up to n={}", r.n_max).unwrap();
                let j = json!({ "per_size": r.per_size, "buckets": r.buckets, "verified_up_to": r.n_max });
                (r.to_jsonl(), s, j)
            } else {
                let mut lines = String::new();
                let mut counts = Vec::new();
                for size in 2..=*n {
                    let keys = if knot.is_empty() {
                        enumerate_all(size)
                    } else {
                        enumerate_where(size, |d| filter.matches(d))
                    }
                    .map_err(census_error)?;
                    counts.push(json!({ "n": size, "types": keys.len() }));
                    for k in &keys {
                        let d = k.diagram();
                        let rec = json!({ "key": k, "n": size, "components": d.num_components(), "determinant": big_json(&determinant(&d)) });
                        lines.push_str(&rec.to_string());
                        lines.push('\n');
                    }
                }
                let s: String = counts.iter().map(|c| format!("n={} types={}\n", c["n"], c["types"])).collect();
                (lines, s, json!({ "per_size": counts }))
            };
            match out {
                Some(p) => {
                    write(p, &lines)?;
                    Ok(Output::ok(summary, j))
                }
                None if cli.json => Ok(Output::ok(String::new(), j)),
                None => {
                    eprint!("{summary}");
                    Ok(Output::ok(lines, j))
                }
            }
        }
        Command::AtlasVerify { table } => {
            let t = AtlasTable::from_json(&read(table)?).map_err(|e| err(Kind::Parse, e.to_string()))?;
            let base = table.parent().unwrap_or(Path::new("."));
            let atlas = t.load_from(base).map_err(|e| err(Kind::Parse, e.to_string()))?;
            let max_n = atlas.cells.values().flatten().map(|e| e.diagram.n()).max().unwrap_or(2);
            let caps = caps_for(cli, max_n, max_n)?;
            let rep = atlas_verify(&atlas, &caps);
            let st = |s: Status| serde_json::to_value(s).unwrap().as_str().unwrap().to_string();
            let mut s = String::new();
            writeln!(s, "same-line equivalence: {}", st(rep.same_line_status)).unwrap();
            for l in &rep.same_line {
                writeln!(s, "  {} {}: {} ~ {}: {}", l.line, l.index, l.first, l.second, l.verdict).unwrap();
            }
            writeln!(s, "distinct exchange classes: {}", st(rep.distinct_classes_status)).unwrap();
            for (x, y) in &rep.shared_classes {
                writeln!(s, "  shared: {x} {y}").unwrap();
            }
            writeln!(s, "coverage: {}", st(rep.coverage_status)).unwrap();
            for c in &rep.coverage {
                writeln!(
                    s,
                    "  cell {},{}: certified {} unknown {} uncovered {} exhaustive {}",
                    c.row,
                    c.col,
                    c.certified,
                    c.unknown,
                    c.uncovered.len(),
                    c.exhaustive
                )
                .unwrap();
            }
            writeln!(s, "counting (|G| = {}): {}", rep.counting.sym_order, st(rep.counting.status)).unwrap();
            for (r, c, k) in &rep.counting.overflowing_cells {
                writeln!(s, "  contradiction: cell {r},{c} has {k} distinct classes").unwrap();
            }
            for (a, b) in &rep.counting.distinguished_columns {
                writeln!(s, "  columns {a} and {b} are distinct L+ types").unwrap();
            }
            for (a, b) in &rep.counting.distinguished_rows {
                writeln!(s, "  rows {a} and {b} are distinct L- types").unwrap();
            }
            writeln!(s, "verdict: {}", st(rep.verdict)).unwrap();
            let kind = match rep.verdict {
                Status::Pass => None,
                Status::Fail => Some(Kind::Verification),
                Status::Unknown => Some(Kind::Caps),
            };
            Ok(Output { text: s, json: serde_json::to_value(&rep).expect("report serializes"), kind })
        }
        Command::Replay { cert } => {
            let c: Certificate = read(cert)?.parse().map_err(|e| err(Kind::Parse, format!("{}: {e}", cert.display())))?;
            let trail = c.replay().map_err(|e| err(Kind::Verification, e.to_string()))?;
            Ok(Output::ok(
                format!("ok: {} moves, ends at {}\n", c.moves.len(), c.to),
                json!({ "valid": true, "moves": c.moves.len(), "trail": trail }),
            ))
        }
        Command::Render { file, out } => {
            let svg = render::svg(&load(file)?);
            match out {
                Some(p) => {
                    write(p, &svg)?;
                    Ok(Output::ok(format!("wrote {}\n", p.display()), json!({ "path": p.display().to_string() })))
                }
                None => Ok(Output::ok(svg.clone(), json!({ "svg": svg }))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = if cli.json { writeln!(stdout, "{}", out.json) } else { write!(stdout, "{}", out.text) };
            ExitCode::from(out.kind.map_or(0, Kind::code))
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": { "kind": e.kind.name(), "message": e.message, "exit_code": e.kind.code() } }));
            } else {
                eprintln!("error: {}", e.message);
            }
            ExitCode::from(e.kind.code())
        }
    }
}
