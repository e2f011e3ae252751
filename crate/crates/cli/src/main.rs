use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use rigidlab::bq::{bq_certify, default_attach, gadget, BqError, GadgetKind};
use rigidlab::numeric::{Backend, Biquad, Coord, FloatScalar, Point, Scalar};
use rigidlab::phi::{enumerate_phi, free_edges, orientation_from_bits, Orientation, PhiEnumeration, PhiError, PhiMode};
use rigidlab::plane::{lattice_ball, PointSet};
use rigidlab::product::{build_product, run_case1, run_case2, CheckedWitness, ProductError};
use rigidlab::relations::{enumerate_homs, find_min_witness, rigidity, RelError, RelStruct, WitnessOutcome};
use rigidlab_cli::config::{Format, RunConfig, EXIT_BUDGET, EXIT_ERROR, EXIT_OK, EXIT_USAGE, EXIT_VERIFY};
use rigidlab_cli::export::{orientation_dot, relation_dot, Scene};
use rigidlab_cli::grid;
use rigidlab_cli::io::{self, AnyOrientation, AnyPoints, IoError};

#[derive(Parser)]
#[command(
    name = "rigidlab",
    version,
    about = "Rigid relations on plane point sets: lattices, orientations, homomorphisms, unit-map certificates and product witnesses"
)]
struct Cli {
    #[command(flatten)]
    cfg: RunConfig,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Triangular-lattice points within a hop radius of the origin.
    Lattice {
        #[arg(long, default_value_t = 1)]
        radius: u32,
        /// Leave out p₂ when it is outside the ball.
        #[arg(long)]
        no_triangle: bool,
    },
    /// Count, list or sample the admissible orientations of a point set.
    Orient {
        /// Point-set document; defaults to the lattice ball of --radius.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        radius: u32,
        #[arg(long, value_enum, default_value_t = OrientMode::Count)]
        mode: OrientMode,
        /// Members to draw with --mode sample.
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Homomorphisms between two relation or orientation documents.
    Hom {
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        dst: PathBuf,
        /// Fixed images, as `i=j`.
        #[arg(long)]
        pin: Vec<String>,
    },
    /// Whether the identity is a structure's only endomorphism.
    Rigid {
        #[arg(long)]
        input: PathBuf,
    },
    /// Build and check witnesses.
    Witness {
        #[command(subcommand)]
        case: WitnessCmd,
    },
    /// Certify that every unit-preserving map of a set keeps |x − y| within ε.
    Certify {
        #[arg(long, value_enum, conflicts_with = "input")]
        gadget: Option<GadgetArg>,
        /// Hops for --gadget chain.
        #[arg(long, default_value_t = 3)]
        hops: usize,
        /// Point-set document to certify instead of a gadget.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Gadget label or point index.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value = "0")]
        epsilon: String,
    },
    /// The product relation of sampled orientations over a lattice ball.
    Product {
        #[arg(long, default_value_t = 1)]
        radius: u32,
        /// Members of J, sampled with --seed.
        #[arg(long, default_value_t = 2)]
        members: usize,
    },
    /// Run the acceptance grid and write one artifact per check.
    VerifyAll,
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Witness for (x, S) ↦ (y, S) in a one-member product.
    Case1 {
        /// Point `x,y`; coordinates like `1/2` or `1/2*sqrt3`.
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long, default_value_t = 1)]
        radius: u32,
    },
    /// Witness for (x, S) ↦ (x, Z), with Z equal to S but for one free edge.
    Case2 {
        #[arg(long)]
        x: String,
        #[arg(long, default_value_t = 1)]
        radius: u32,
        /// Free edge to reverse; drawn with --seed when absent.
        #[arg(long)]
        flip: Option<usize>,
    },
    /// Smallest witness for x ↦ y in a relation document.
    Min {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        /// Candidate subsets to check before settling for a greedy witness.
        #[arg(long, default_value_t = 1 << 16)]
        budget: u64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OrientMode {
    Count,
    All,
    Sample,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GadgetArg {
    TriangleExtension,
    Rhombus,
    MoserSpindle,
    Chain,
}

struct Failure {
    code: u8,
    msg: String,
}

type Outcome = Result<u8, Failure>;

fn fail(code: u8, msg: impl std::fmt::Display) -> Failure {
    Failure { code, msg: msg.to_string() }
}

fn usage(msg: impl std::fmt::Display) -> Failure {
    fail(EXIT_USAGE, msg)
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        let code = match e {
            IoError::File { .. } => EXIT_ERROR,
            _ => EXIT_USAGE,
        };
        fail(code, e)
    }
}

fn bq_code(e: &BqError) -> u8 {
    match e {
        BqError::BranchLimit(_) | BqError::BudgetExhausted { .. } => EXIT_BUDGET,
        BqError::NotAnchored { .. } | BqError::Flexible { .. } | BqError::NotConnected => EXIT_VERIFY,
        BqError::MissingPoint | BqError::InvalidOrder | BqError::BadAttach(_) => EXIT_USAGE,
        BqError::Numeric(_) => EXIT_ERROR,
    }
}

fn product_code(e: &ProductError) -> u8 {
    match e {
        ProductError::Bq(b) => bq_code(b),
        ProductError::NotStrict(_) => EXIT_BUDGET,
        ProductError::NoSeparatingAnchor
        | ProductError::NoConflict
        | ProductError::OutsideBase(_)
        | ProductError::NoSuchMember(_)
        | ProductError::Phi(_)
        | ProductError::Family(_)
        | ProductError::BaseMismatch => EXIT_USAGE,
        _ => EXIT_VERIFY,
    }
}

/// Coordinate types the CLI can build from parsed scalars.
trait Backendish: Coord {
    fn from_scalar(s: &Scalar, tau: f64) -> Option<Self>;
}

impl Backendish for Biquad {
    fn from_scalar(s: &Scalar, _tau: f64) -> Option<Self> {
        match s {
            Scalar::Exact(v) => Some(v.clone()),
            Scalar::Float(_) => None,
        }
    }
}

impl Backendish for FloatScalar {
    fn from_scalar(s: &Scalar, tau: f64) -> Option<Self> {
        Some(s.to_float(tau))
    }
}

fn parse_point<C: Backendish>(s: &str, tau: f64) -> Result<Point<C>, Failure> {
    let bad = || usage(format!("cannot read point {s:?}; expected `x,y` with coordinates like 3/2 or 1/2*sqrt3"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let coord = |t: &str| -> Result<C, Failure> {
        let v = Scalar::parse(t, tau).map_err(|_| bad())?;
        C::from_scalar(&v, tau).ok_or_else(|| usage(format!("{t:?} is a decimal; use --backend float or an exact value")))
    };
    Ok(Point::new(coord(a)?, coord(b)?))
}

fn ball<C: Coord>(radius: u32, triangle: bool, tau: f64) -> PointSet<C> {
    let b = lattice_ball::<C>(radius, triangle);
    if C::BACKEND == Backend::Float {
        b.with_tolerance(tau)
    } else {
        b
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => Ok(io::write_atomic(path, text.as_bytes())?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn only(cfg: &RunConfig, allowed: &[Format], what: &str) -> Result<(), Failure> {
    if allowed.contains(&cfg.format) {
        Ok(())
    } else {
        Err(usage(format!("{what} output does not support --format {:?}", cfg.format).to_lowercase()))
    }
}

fn cmd_lattice<C: Coord>(cfg: &RunConfig, radius: u32, no_triangle: bool) -> Outcome {
    only(cfg, &[Format::Json, Format::Svg], "lattice")?;
    let b = ball::<C>(radius, !no_triangle, cfg.tau());
    let text = match cfg.format {
        Format::Svg => Scene::new(&b).render(),
        _ => io::pointset_document(&b)?,
    };
    emit(cfg, &text)?;
    eprintln!("{} points", b.len());
    Ok(EXIT_OK)
}

fn convert<C: Backendish, D: Coord>(ps: &PointSet<D>, tau: f64) -> Option<PointSet<C>> {
    let c = |v: &D| C::from_scalar(&v.to_scalar(), tau);
    let pts = ps.iter().map(|p| Some(Point::new(c(&p.x)?, c(&p.y)?))).collect::<Option<Vec<_>>>()?;
    Some(PointSet::from_points(pts))
}

fn load_points<C: Backendish>(cfg: &RunConfig, input: &Option<PathBuf>, radius: u32) -> Result<PointSet<C>, Failure> {
    let Some(path) = input else { return Ok(ball(radius, true, cfg.tau())) };
    let converted = match io::read_pointset(&io::read_file(path)?)? {
        AnyPoints::Exact(p) => convert(&p, cfg.tau()),
        AnyPoints::Float(p) => convert(&p, cfg.tau()),
    };
    converted.ok_or_else(|| usage(format!("{} holds float coordinates; pass --backend float", path.display())))
}

fn phi_failure(e: PhiError) -> Failure {
    match e {
        PhiError::TooMany(_) => fail(EXIT_BUDGET, format!("{e}; use --mode count or --mode sample")),
        _ => usage(e),
    }
}

#[derive(Serialize)]
#[serde(bound = "C: Coord")]
struct PhiDoc<C> {
    free_edges: usize,
    count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    points: Option<Vec<Point<C>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    members: Option<Vec<BTreeSet<(usize, usize)>>>,
}

fn cmd_orient<C: Backendish>(cfg: &RunConfig, input: &Option<PathBuf>, radius: u32, mode: OrientMode, k: usize) -> Outcome {
    let base: PointSet<C> = load_points(cfg, input, radius)?;
    let free = free_edges(&base).map_err(phi_failure)?.len();
    let count = match enumerate_phi(&base, PhiMode::Count).map_err(phi_failure)? {
        PhiEnumeration::Count(c) => c,
        PhiEnumeration::Members(m) => m.len() as u128,
    };
    let mode = match mode {
        OrientMode::Count => PhiMode::Count,
        OrientMode::All => PhiMode::All,
        OrientMode::Sample => PhiMode::Sample { seed: cfg.seed, k },
    };
    let members = match enumerate_phi(&base, mode).map_err(phi_failure)? {
        PhiEnumeration::Count(_) => None,
        PhiEnumeration::Members(m) => Some(m),
    };
    let text = match (cfg.format, &members) {
        (Format::Json, _) => io::to_document(
            io::PHI,
            &PhiDoc {
                free_edges: free,
                count: count.to_string(),
                points: members.as_ref().map(|_| base.points().to_vec()),
                members: members.as_ref().map(|m| m.iter().map(|o| o.pairs().clone()).collect()),
            },
        )?,
        (Format::Dot, Some(m)) => m.iter().enumerate().map(|(i, o)| orientation_dot(o, &format!("member_{i}"))).collect(),
        (Format::Svg, Some(m)) if m.len() == 1 => Scene::new(m[0].base()).arcs(m[0].pairs()).render(),
        (Format::Svg, Some(_)) => return Err(usage("svg output draws one member; use --mode sample --k 1")),
        (_, None) => return Err(usage("--mode count only has json output")),
    };
    emit(cfg, &text)?;
    eprintln!("{free} free edges, {count} members");
    Ok(EXIT_OK)
}

fn load_relation(path: &Path) -> Result<RelStruct, Failure> {
    let text = io::read_file(path)?;
    Ok(match io::schema_of(&text).as_deref() {
        Some(io::ORIENTATION) => match io::read_orientation(&text)? {
            AnyOrientation::Exact(o) => o.relation(),
            AnyOrientation::Float(o) => o.relation(),
        },
        _ => io::from_document(io::RELATION, &text)?,
    })
}

fn parse_pin(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("cannot read pin {s:?}; expected `i=j`"));
    let (a, b) = s.split_once('=').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn rel_failure(e: RelError) -> Failure {
    usage(e)
}

fn cmd_hom(cfg: &RunConfig, src: &Path, dst: &Path, pins: &[String]) -> Outcome {
    only(cfg, &[Format::Json], "hom")?;
    let (s, d) = (load_relation(src)?, load_relation(dst)?);
    let pin = pins.iter().map(|p| parse_pin(p)).collect::<Result<Vec<_>, _>>()?;
    let found = enumerate_homs(&s, &d, &pin, Some(cfg.hom_limit)).map_err(rel_failure)?;
    let text = io::to_document(
        io::HOMS,
        &json!({ "count": found.homs.len(), "truncated": found.truncated, "nodes": found.nodes, "homs": found.homs }),
    )?;
    emit(cfg, &text)?;
    let n = found.homs.len();
    eprintln!("{}{n} homomorphism{}", if found.truncated { "more than " } else { "" }, if n == 1 { "" } else { "s" });
    Ok(if found.truncated { EXIT_BUDGET } else { EXIT_OK })
}

fn cmd_rigid(cfg: &RunConfig, input: &Path) -> Outcome {
    only(cfg, &[Format::Json], "rigid")?;
    let s = load_relation(input)?;
    let r = rigidity(&s, Some(cfg.hom_limit));
    let summary = if r.rigid {
        "rigid: the identity is the only endomorphism".to_string()
    } else if r.truncated {
        format!("not rigid: more than {} endomorphisms", r.endomorphisms)
    } else {
        format!("not rigid: {} endomorphisms", r.endomorphisms)
    };
    let text = io::to_document(
        io::RIGIDITY,
        &json!({ "rigid": r.rigid, "endomorphisms": r.endomorphisms, "truncated": r.truncated, "summary": summary }),
    )?;
    emit(cfg, &text)?;
    eprintln!("{summary}");
    Ok(if r.rigid { EXIT_OK } else { EXIT_VERIFY })
}

fn members_for<C: Coord>(base: &PointSet<C>, seed: u64, k: usize) -> Result<Vec<Orientation<C>>, Failure> {
    match enumerate_phi(base, PhiMode::Sample { seed, k }).map_err(phi_failure)? {
        PhiEnumeration::Members(m) => Ok(m),
        PhiEnumeration::Count(_) => Err(fail(EXIT_ERROR, "sampling returned a count")),
    }
}

fn budget(cfg: &RunConfig) -> rigidlab::bq::GrowBudget {
    rigidlab::bq::GrowBudget { branch_limit: Some(cfg.branch_limit), ..Default::default() }
}

fn report_witness<C: Coord>(cfg: &RunConfig, case: &str, r: Result<CheckedWitness<C>, ProductError>, highlight: &[Point<C>]) -> Outcome {
    let c = r.map_err(|e| fail(product_code(&e), e))?;
    let valid = c.outcome.is_valid();
    let text = match cfg.format {
        Format::Json => {
            let labels = c.product.structure().labels().expect("product structures are labelled");
            io::to_document(
                io::WITNESS,
                &json!({
                    "case": case,
                    "outcome": if valid { "valid" } else { "counterexample" },
                    "counterexample": match &c.outcome {
                        WitnessOutcome::Counterexample { map } => json!(map),
                        WitnessOutcome::Valid => json!(null),
                    },
                    "src": c.witness.src,
                    "tgt": c.witness.tgt,
                    "src_label": labels[c.witness.src],
                    "tgt_label": labels[c.witness.tgt],
                    "elements": c.witness.elements,
                    "points": c.witness.points,
                    "certificates": c.witness.certificates,
                    "conflict": c.witness.conflict,
                }),
            )?
        }
        Format::Svg => {
            let idx: Vec<usize> = highlight.iter().filter_map(|p| c.witness.points.index_of(p)).collect();
            Scene::new(&c.witness.points).highlight(&idx).render()
        }
        Format::Dot => relation_dot(&c.product.structure().induced(&c.witness.elements), "witness"),
    };
    emit(cfg, &text)?;
    eprintln!("{case}: {} witness elements, {}", c.witness.elements.len(), if valid { "valid" } else { "counterexample found" });
    Ok(if valid { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_case1<C: Backendish>(cfg: &RunConfig, x: &str, y: &str, radius: u32) -> Outcome {
    let (x, y) = (parse_point::<C>(x, cfg.tau())?, parse_point::<C>(y, cfg.tau())?);
    let base = ball::<C>(radius, true, cfg.tau());
    let s = members_for(&base, cfg.seed, 1)?;
    let r = run_case1(&base, &s, &x, &y, 0, budget(cfg));
    report_witness(cfg, "case1", r, &[x, y])
}

fn cmd_case2<C: Backendish>(cfg: &RunConfig, x: &str, radius: u32, flip: Option<usize>) -> Outcome {
    use rand::{Rng, SeedableRng};
    let x = parse_point::<C>(x, cfg.tau())?;
    let base = ball::<C>(radius, true, cfg.tau());
    let s = members_for(&base, cfg.seed, 1)?.remove(0);
    let free = free_edges(&base).map_err(phi_failure)?;
    let edge = match flip {
        Some(e) if e < free.len() => e,
        Some(e) => return Err(usage(format!("--flip {e} is out of range; the base has {} free edges", free.len()))),
        None => rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed).gen_range(0..free.len()),
    };
    let bits: Vec<bool> = free.iter().map(|&(i, j)| s.pairs().contains(&(j, i))).collect();
    let z = orientation_from_bits(&base, |k| bits[k] != (k == edge)).map_err(phi_failure)?;
    let schedule = [C::zero().to_scalar()];
    let r = run_case2(&base, &[s, z], &x, 0, 1, &schedule, budget(cfg));
    report_witness(cfg, "case2", r, &[x])
}

fn cmd_min(cfg: &RunConfig, input: &Path, x: usize, y: usize, budget: u64) -> Outcome {
    only(cfg, &[Format::Json], "witness min")?;
    let s = load_relation(input)?;
    let m = find_min_witness(&s, x, y, budget).map_err(|e| match e {
        RelError::NoWitnessExists(..) => fail(EXIT_VERIFY, e),
        _ => usage(e),
    })?;
    emit(cfg, &io::to_document(io::MIN_WITNESS, &m)?)?;
    eprintln!("witness of size {} ({})", m.witness.subset.len(), if m.minimal { "minimal" } else { "greedy" });
    Ok(EXIT_OK)
}

fn resolve(labels: &[String], key: &str, n: usize) -> Result<usize, Failure> {
    if let Some(i) = labels.iter().position(|l| l == key) {
        return Ok(i);
    }
    match key.parse::<usize>() {
        Ok(i) if i < n => Ok(i),
        _ => Err(usage(format!("no point labelled {key:?}"))),
    }
}

fn cmd_certify<C: Backendish>(
    cfg: &RunConfig,
    g: Option<GadgetArg>,
    hops: usize,
    input: &Option<PathBuf>,
    x: &str,
    y: &str,
    eps: &str,
) -> Outcome {
    let (points, labels): (PointSet<C>, Vec<String>) = match (g, input) {
        (Some(g), _) => {
            let kind = match g {
                GadgetArg::TriangleExtension => GadgetKind::TriangleExtension,
                GadgetArg::Rhombus => GadgetKind::Rhombus,
                GadgetArg::MoserSpindle => GadgetKind::MoserSpindle,
                GadgetArg::Chain => GadgetKind::Chain(hops),
            };
            let attach: Vec<Point<C>> = default_attach(kind).into_iter().map(|p| p.with_tolerance(cfg.tau())).collect();
            let built = gadget(kind, &attach).map_err(|e| fail(bq_code(&e), e))?;
            (built.points, built.labels)
        }
        (None, Some(_)) => (load_points(cfg, input, 0)?, Vec::new()),
        (None, None) => return Err(usage("pass --gadget or --input")),
    };
    let (xi, yi) = (resolve(&labels, x, points.len())?, resolve(&labels, y, points.len())?);
    let epsilon = Scalar::parse(eps, cfg.tau()).map_err(|e| usage(format!("--epsilon: {e}")))?;
    let report = bq_certify(&points, &points[xi], &points[yi], &epsilon, Some(cfg.branch_limit)).map_err(|e| fail(bq_code(&e), e))?;
    let text = match cfg.format {
        Format::Json => io::to_document(io::CERTIFICATE, &json!({ "report": report, "points": points.points(), "labels": labels }))?,
        Format::Svg => {
            let scene = Scene::new(&points).highlight(&[xi, yi]);
            match &report.counterexample {
                Some(f) => scene.overlay(f).render(),
                None => scene.render(),
            }
        }
        Format::Dot => return Err(usage("certify output does not support --format dot")),
    };
    emit(cfg, &text)?;
    eprintln!(
        "{}: {} maps, max deviation {} (epsilon {})",
        if report.certified { "certified" } else { "not certified" },
        report.maps,
        report.max_deviation,
        report.epsilon
    );
    Ok(if report.certified { EXIT_OK } else { EXIT_VERIFY })
}

fn cmd_product<C: Coord>(cfg: &RunConfig, radius: u32, k: usize) -> Outcome {
    only(cfg, &[Format::Json, Format::Dot], "product")?;
    if k == 0 {
        return Err(usage("--members must be at least 1"));
    }
    let base = ball::<C>(radius, true, cfg.tau());
    let m = members_for(&base, cfg.seed, k)?;
    let p = build_product(&base, m).map_err(|e| fail(product_code(&e), e))?;
    let text = match cfg.format {
        Format::Dot => relation_dot(p.structure(), "product"),
        _ => io::to_document(io::PRODUCT, &json!({ "points": base.points(), "members": p.family().len(), "structure": p.structure() }))?,
    };
    emit(cfg, &text)?;
    eprintln!("{} elements, {} pairs", p.structure().n(), p.structure().pairs().len());
    Ok(EXIT_OK)
}

/// FNV-1a over the artifact bytes, so two runs can be compared at a glance.
fn digest(parts: &[(String, String)]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for (name, body) in parts {
        for b in name.bytes().chain([0]).chain(body.bytes()).chain([0]) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}

fn cmd_verify_all(cfg: &RunConfig) -> Outcome {
    only(cfg, &[Format::Json], "verify-all")?;
    let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("verify-all"));
    std::fs::create_dir_all(&dir).map_err(|source| IoError::File { path: dir.clone(), source })?;
    let mut artifacts = Vec::new();
    let mut rows = Vec::new();
    let mut all = true;
    for spec in grid::CRITERIA.iter() {
        let t = grid::run(spec, cfg.seed);
        let c = &t.criterion;
        all &= c.passed;
        println!("[{}] {}. {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.summary);
        eprintln!("    {:.3}s", t.elapsed.as_secs_f64());
        artifacts.push((format!("criterion-{}.json", c.id), io::to_document(io::CRITERION, c)?));
        rows.push(json!({ "id": c.id, "name": c.name, "passed": c.passed, "summary": c.summary }));
    }
    let summary =
        io::to_document(io::VERIFY, &json!({ "seed": cfg.seed, "passed": all, "criteria": rows, "artifacts_digest": digest(&artifacts) }))?;
    artifacts.push(("summary.json".into(), summary));
    for (name, body) in &artifacts {
        io::write_atomic(&dir.join(name), body.as_bytes())?;
    }
    println!("{} -> {}", if all { "all checks passed" } else { "some checks failed" }, dir.display());
    Ok(if all { EXIT_OK } else { EXIT_VERIFY })
}

fn dispatch(cli: Cli) -> Outcome {
    let cfg = &cli.cfg;
    cfg.validate().map_err(usage)?;
    grid::configure_threads();
    let float = cfg.backend() == Backend::Float;
    match &cli.cmd {
        Command::Lattice { radius, no_triangle } if float => cmd_lattice::<FloatScalar>(cfg, *radius, *no_triangle),
        Command::Lattice { radius, no_triangle } => cmd_lattice::<Biquad>(cfg, *radius, *no_triangle),
        Command::Orient { input, radius, mode, k } if float => cmd_orient::<FloatScalar>(cfg, input, *radius, *mode, *k),
        Command::Orient { input, radius, mode, k } => cmd_orient::<Biquad>(cfg, input, *radius, *mode, *k),
        Command::Hom { src, dst, pin } => cmd_hom(cfg, src, dst, pin),
        Command::Rigid { input } => cmd_rigid(cfg, input),
        Command::Witness { case } => match case {
            WitnessCmd::Case1 { x, y, radius } if float => cmd_case1::<FloatScalar>(cfg, x, y, *radius),
            WitnessCmd::Case1 { x, y, radius } => cmd_case1::<Biquad>(cfg, x, y, *radius),
            WitnessCmd::Case2 { x, radius, flip } if float => cmd_case2::<FloatScalar>(cfg, x, *radius, *flip),
            WitnessCmd::Case2 { x, radius, flip } => cmd_case2::<Biquad>(cfg, x, *radius, *flip),
            WitnessCmd::Min { input, x, y, budget } => cmd_min(cfg, input, *x, *y, *budget),
        },
        Command::Certify { gadget, hops, input, x, y, epsilon } if float => {
            cmd_certify::<FloatScalar>(cfg, *gadget, *hops, input, x, y, epsilon)
        }
        Command::Certify { gadget, hops, input, x, y, epsilon } => cmd_certify::<Biquad>(cfg, *gadget, *hops, input, x, y, epsilon),
        Command::Product { radius, members } if float => cmd_product::<FloatScalar>(cfg, *radius, *members),
        Command::Product { radius, members } => cmd_product::<Biquad>(cfg, *radius, *members),
        Command::VerifyAll => cmd_verify_all(cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
