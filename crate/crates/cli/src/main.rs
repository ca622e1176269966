//! Batch interface: read instance files, run computations and verification
//! suites, emit deterministic reports.
//!
//! Exit codes: 0 success, 1 verification failure, 2 schema errors or
//! inapplicable requests, 3 twist cocycle validation failure.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use dimred::brauer_formulas::{
    bockstein_of_g_triple, check_tu_closure, seeded_closure_samples, seeded_g, seeded_pullback,
    tudimred_witnesses, BrauerTriple, StandardSetup, SurjectivityCocycle, WLiftData,
};
use dimred::coefficients::CoefficientRing;
use dimred::complex::{assemble_complex, assemble_two_column, verify_column_les};
use dimred::homology::coefficient_les_report;
use dimred::json::{
    self, group_to_json, setup_to_spec, twist_to_spec, InstanceFile, JsonError, NerveSpec,
    INSTANCE_SCHEMA, REPORT_SCHEMA,
};
use dimred::nerve::Nerve;
use dimred::tu_groupoid::{
    brute_cohomology, check_onecocycle_independence, cyclic_point_groupoid, enumerate_cocycles,
    qz_cohomology, swap_groupoid, tu_d_squared_is_zero, GroupoidCover,
};
use dimred::twist::{cup_int, TwistCocycle, TwistError};
use dimred::{fixtures, Cochain};

#[derive(Parser)]
#[command(
    name = "dimred",
    version,
    about = "Exact twisted Čech cohomology for torus bundles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute cohomology groups of an instance.
    Compute {
        #[arg(long)]
        instance: PathBuf,
        /// A degree `K` or an inclusive range `A..B`.
        #[arg(long)]
        degree: String,
        /// Coefficients: Z, Q or QZ.
        #[arg(long, default_value = "Z")]
        coeff: String,
    },
    /// Run verification checks against an instance.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        /// Comma-separated subset of d2,steenrod,les,tu,surjectivity,lift.
        #[arg(long)]
        checks: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample count for the sampled suites.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Emit a named instance from the worked example library.
    Example {
        /// One of hopf, lens, t3, nilmanifold, s2-rank2, torus-nerve.
        name: String,
        /// Euler number for lens/nilmanifold.
        #[arg(long)]
        k: Option<i64>,
        /// Euler vector `a,b` for s2-rank2.
        #[arg(long)]
        euler: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    /// Exit 2: malformed input, unknown requests, inapplicable checks.
    Schema(String),
    /// Exit 3: the instance's twist is not a cocycle.
    NotClosed(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::NotClosed(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Schema(m) | CliError::NotClosed(m) => m,
        }
    }
}

impl From<JsonError> for CliError {
    fn from(e: JsonError) -> Self {
        match e {
            JsonError::Twist(TwistError::NotClosed {
                ref simplex,
                component,
                ref value,
            }) => CliError::NotClosed(format!(
                "twist is not closed at {simplex:?}, component {component}, value {value}"
            )),
            other => CliError::Schema(other.to_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct Report {
    schema: &'static str,
    tool_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_digest: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    status: &'static str,
    results: Vec<ResultEntry>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum ResultEntry {
    Group {
        degree: usize,
        coefficients: String,
        rank: usize,
        torsion: Vec<i64>,
    },
    Check {
        check: String,
        status: &'static str,
        detail: String,
    },
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes"),
            Format::Text => {
                let mut lines = Vec::new();
                for entry in &self.results {
                    match entry {
                        ResultEntry::Group {
                            degree,
                            coefficients,
                            rank,
                            torsion,
                        } => {
                            let torsion = torsion
                                .iter()
                                .map(|t| format!("Z/{t}"))
                                .collect::<Vec<_>>()
                                .join(" + ");
                            let free = |r: usize, base: &str| {
                                if r == 1 {
                                    base.to_string()
                                } else {
                                    format!("{base}^{r}")
                                }
                            };
                            let base = match coefficients.as_str() {
                                "Q" => "Q",
                                "QZ" => "Q/Z",
                                _ => "Z",
                            };
                            let group = match (rank, torsion.is_empty()) {
                                (0, true) => "0".to_string(),
                                (0, false) => torsion,
                                (r, true) => free(*r, base),
                                (r, false) => format!("{} + {torsion}", free(*r, base)),
                            };
                            lines.push(format!("H^{degree}({coefficients}) = {group}"));
                        }
                        ResultEntry::Check {
                            check,
                            status,
                            detail,
                        } => {
                            lines.push(format!("{check}: {status} ({detail})"));
                        }
                    }
                }
                lines.push(format!("status: {}", self.status));
                lines.join("\n")
            }
        }
    }
}

// ---------------------------------------------------------------------------

struct Instance {
    nerve: Nerve,
    twist: TwistCocycle,
    setup: Option<StandardSetup>,
    digest: String,
}

fn load_instance(path: &PathBuf) -> Result<Instance, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    let digest = {
        let mut hex = String::from("sha256:");
        for byte in Sha256::digest(&bytes) {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    };
    let file: InstanceFile = serde_json::from_slice(&bytes)
        .map_err(|e| CliError::Schema(format!("malformed instance file: {e}")))?;
    if file.schema != INSTANCE_SCHEMA {
        return Err(CliError::Schema(format!(
            "unsupported schema {:?} (expected {INSTANCE_SCHEMA:?})",
            file.schema
        )));
    }
    let nerve = json::nerve_from_spec(&file.nerve)?;
    let twist = json::twist_from_spec(&nerve, &file.twist)?;
    let setup = file
        .setup
        .as_ref()
        .map(|s| json::setup_from_spec(&nerve, s))
        .transpose()?;
    Ok(Instance {
        nerve,
        twist,
        setup,
        digest,
    })
}

fn parse_degrees(text: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Schema(format!("bad degree specification {text:?}"));
    if let Some((a, b)) = text.split_once("..") {
        let lo: usize = a.trim().parse().map_err(|_| bad())?;
        let hi: usize = b.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        Ok((lo, hi))
    } else {
        let k: usize = text.trim().parse().map_err(|_| bad())?;
        Ok((k, k))
    }
}

fn run_compute(
    instance: &Instance,
    degrees: (usize, usize),
    ring: CoefficientRing,
) -> Result<Vec<ResultEntry>, CliError> {
    // Assemble far enough for universal coefficients at the top degree.
    let kmax = degrees.1 + 2;
    let cx = assemble_complex(&instance.nerve, &instance.twist, ring, kmax);
    let mut out = Vec::new();
    for k in degrees.0..=degrees.1 {
        let group = cx
            .cohomology(k)
            .map_err(|e| CliError::Schema(e.to_string()))?;
        let gj = group_to_json(&group).map_err(CliError::from)?;
        out.push(ResultEntry::Group {
            degree: k,
            coefficients: gj.coefficients,
            rank: gj.rank,
            torsion: gj.torsion,
        });
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Verification checks
// ---------------------------------------------------------------------------

fn check_entry(name: &str, pass: bool, detail: String) -> ResultEntry {
    ResultEntry::Check {
        check: name.to_string(),
        status: if pass { "pass" } else { "fail" },
        detail,
    }
}

fn check_d2(instance: &Instance) -> ResultEntry {
    let kmax = instance.nerve.max_dim() + 3;
    let three = assemble_complex(
        &instance.nerve,
        &instance.twist,
        CoefficientRing::Integer,
        kmax,
    );
    let two = assemble_two_column(
        &instance.nerve,
        &instance.twist,
        CoefficientRing::Integer,
        kmax,
    );
    let ok = three.matrix_complex.composition_is_zero() && two.matrix_complex.composition_is_zero();
    check_entry(
        "d2",
        ok,
        format!("consecutive differentials compose to zero through degree {kmax}"),
    )
}

fn check_steenrod(instance: &Instance) -> ResultEntry {
    use dimred::twist::steenrod_cochain;
    use num_bigint::BigInt;
    use num_traits::Zero;
    let nerve = &instance.nerve;
    let n = instance.twist.n();
    let steenrod = steenrod_cochain(nerve, &instance.twist);
    let component = |l: usize| {
        let mut out: Cochain<BigInt> = Cochain::new(2, BigInt::zero());
        for (s, v) in instance.twist.cochain().iter() {
            out.set(s.clone(), v.component(l).clone());
        }
        out
    };
    let mut ok = true;
    for i in 0..n {
        for j in (i + 1)..n {
            let fi = component(i);
            let fj = component(j);
            let lhs = cup_int(nerve, &fi, &fj).add(&cup_int(nerve, &fj, &fi).neg());
            let cij = steenrod.component(i, j);
            let rhs = dimred::nerve::cech_differential(nerve, &cij);
            if lhs != rhs {
                ok = false;
            }
        }
    }
    let detail = if nerve.simplex_count(4) == 0 {
        "identity holds (vacuous: no 4-simplices)".to_string()
    } else {
        format!("identity checked on {} 4-simplices", nerve.simplex_count(4))
    };
    check_entry("steenrod", ok, detail)
}

fn check_les(instance: &Instance) -> ResultEntry {
    let kmax = instance.nerve.max_dim() + 3;
    let two = assemble_two_column(
        &instance.nerve,
        &instance.twist,
        CoefficientRing::Integer,
        kmax,
    );
    let mut details = Vec::new();
    let mut ok = true;
    match verify_column_les(&two, 1) {
        Ok(report) => {
            if !report.all_exact() {
                ok = false;
                details.push("column filtration of the two-column complex fails".to_string());
            }
        }
        Err(e) => {
            ok = false;
            details.push(e.to_string());
        }
    }
    let three = assemble_complex(
        &instance.nerve,
        &instance.twist,
        CoefficientRing::Integer,
        kmax,
    );
    if instance.twist.n() >= 2 {
        match verify_column_les(&three, 2) {
            Ok(report) => {
                if !report.all_exact() {
                    ok = false;
                    details.push("column filtration of the three-column complex fails".to_string());
                }
            }
            Err(e) => {
                ok = false;
                details.push(e.to_string());
            }
        }
    }
    match coefficient_les_report(&three.matrix_complex) {
        Ok(report) => {
            if !report.all_exact() {
                ok = false;
                for node in report.nodes.iter().filter(|n| !n.exact) {
                    details.push(format!("{}: {}", node.label, node.detail));
                }
            }
        }
        Err(e) => {
            ok = false;
            details.push(e.to_string());
        }
    }
    let detail = if details.is_empty() {
        "column filtration and coefficient sequences exact at every node".to_string()
    } else {
        details.join("; ")
    };
    check_entry("les", ok, detail)
}

fn check_tu(seed: u64) -> ResultEntry {
    let budget = 4_000_000usize;
    let mut ok = true;
    let mut details = Vec::new();

    let swap = swap_groupoid();
    let g = &swap.groupoid;
    let all_arrows: BTreeSet<usize> = (0..g.num_arrows()).collect();
    let swap_covers = [
        GroupoidCover::trivial(g),
        GroupoidCover {
            object_sets: vec![BTreeSet::from([0]), BTreeSet::from([1])],
            arrow_sets: vec![all_arrows.clone()],
        },
        GroupoidCover {
            object_sets: vec![BTreeSet::from([0]), BTreeSet::from([1])],
            arrow_sets: vec![
                BTreeSet::from([swap.arrow_id(0, 0), swap.arrow_id(0, 1)]),
                BTreeSet::from([swap.arrow_id(1, 0), swap.arrow_id(1, 1)]),
                all_arrows.clone(),
            ],
        },
    ];
    for (i, cover) in swap_covers.iter().enumerate() {
        match tu_d_squared_is_zero(g, cover, 3, budget) {
            Ok(true) => {}
            _ => {
                ok = false;
                details.push(format!("∂² ≠ 0 for the swap groupoid, cover {i}"));
            }
        }
    }

    let z4 = cyclic_point_groupoid(4);
    let g4 = &z4.groupoid;
    let all4: BTreeSet<usize> = (0..g4.num_arrows()).collect();
    let z4_covers = [
        GroupoidCover::trivial(g4),
        GroupoidCover {
            object_sets: vec![BTreeSet::from([0])],
            arrow_sets: vec![
                BTreeSet::from([z4.arrow_id(0, 0), z4.arrow_id(1, 0)]),
                BTreeSet::from([z4.arrow_id(2, 0), z4.arrow_id(3, 0)]),
            ],
        },
        GroupoidCover {
            object_sets: vec![BTreeSet::from([0])],
            arrow_sets: vec![
                BTreeSet::from([z4.arrow_id(0, 0), z4.arrow_id(1, 0), z4.arrow_id(2, 0)]),
                BTreeSet::from([z4.arrow_id(2, 0), z4.arrow_id(3, 0)]),
                all4.clone(),
            ],
        },
    ];
    for (i, cover) in z4_covers.iter().enumerate() {
        match tu_d_squared_is_zero(g4, cover, 3, budget) {
            Ok(true) => {}
            _ => {
                ok = false;
                details.push(format!("∂² ≠ 0 for Z/4 on a point, cover {i}"));
            }
        }
    }

    // Brute cohomology of Z/2 on a point.
    let z2 = cyclic_point_groupoid(2);
    let trivial = GroupoidCover::trivial(&z2.groupoid);
    let h1 = brute_cohomology(&z2.groupoid, &trivial, 1, 2, budget);
    if !matches!(&h1, Ok(h) if h.torsion == vec![num_bigint::BigInt::from(2)]) {
        ok = false;
        details.push("H¹(Z/2 ⋉ pt, (1/2)Z/Z) ≠ Z/2".to_string());
    }
    let h2 = qz_cohomology(&z2.groupoid, &trivial, 2, budget);
    if !matches!(&h2, Ok(h) if h.is_trivial()) {
        ok = false;
        details.push("H²(Z/2 ⋉ pt, Q/Z) ≠ 0".to_string());
    }

    // Independence of the arrow-cover index for enumerated 1-cocycles.
    let two_cell = GroupoidCover {
        object_sets: vec![BTreeSet::from([0])],
        arrow_sets: vec![
            BTreeSet::from([z2.arrow_id(0, 0), z2.arrow_id(1, 0)]),
            BTreeSet::from([z2.arrow_id(0, 0), z2.arrow_id(1, 0)]),
        ],
    };
    for cover in [&trivial, &two_cell] {
        match enumerate_cocycles(&z2.groupoid, cover, 1, 2, budget) {
            Ok(cocycles) => {
                for z in &cocycles {
                    if check_onecocycle_independence(&z2.groupoid, cover, z, budget) != Ok(true) {
                        ok = false;
                        details.push("1-cocycle independence fails".to_string());
                    }
                }
            }
            Err(e) => {
                ok = false;
                details.push(e.to_string());
            }
        }
    }
    let _ = seed;
    let detail = if details.is_empty() {
        "∂² = 0 under 3 covers each; brute groups and 1-cocycle independence as expected"
            .to_string()
    } else {
        details.join("; ")
    };
    check_entry("tu", ok, detail)
}

fn check_surjectivity(setup: &StandardSetup, seed: u64, samples: usize) -> ResultEntry {
    let g = seeded_g(setup, seed ^ 0x5e11);
    let g_triple = match BrauerTriple::from_g(setup, g) {
        Ok(t) => t,
        Err(e) => return check_entry("surjectivity", false, e.to_string()),
    };
    let triple = g_triple.sum(&seeded_pullback(setup, seed ^ 0x9a3f));
    if let Err(e) = triple.validate(setup) {
        return check_entry("surjectivity", false, e.to_string());
    }
    let wdata = WLiftData::Seeded {
        seed: seed ^ 0xbeef,
        spread: 3,
        normalized: true,
    };
    let phi = SurjectivityCocycle {
        triple: &triple,
        setup,
        wdata: &wdata,
    };
    let plan = seeded_closure_samples(setup, seed, samples);
    let closure = match check_tu_closure(&phi, &plan, Some(seed)) {
        Ok(r) => r,
        Err(e) => return check_entry("surjectivity", false, e.to_string()),
    };
    let witnesses = match tudimred_witnesses(&triple, setup, &wdata, seed, samples.max(1)) {
        Ok(r) => r,
        Err(e) => return check_entry("surjectivity", false, e.to_string()),
    };
    let ok = closure.all_zero() && witnesses.all_hold();
    let detail = format!(
        "closure zero on {} samples; witness identities checked {} times{}",
        closure.samples,
        witnesses.checks,
        if ok {
            String::new()
        } else {
            format!(
                "; {} closure failures, {} identity failures",
                closure.failures.len(),
                witnesses.failures.len()
            )
        }
    );
    check_entry("surjectivity", ok, detail)
}

fn check_lift(setup: &StandardSetup, seed: u64, rounds: usize) -> ResultEntry {
    for i in 0..rounds as u64 {
        let g = seeded_g(setup, seed.wrapping_add(i));
        match bockstein_of_g_triple(setup, &g) {
            Ok((d30, d21, d12)) => {
                if !(d30.is_zero() && d21.is_zero() && d12.is_zero()) {
                    return check_entry(
                        "lift",
                        false,
                        format!("nonzero connecting image at round {i}"),
                    );
                }
            }
            Err(e) => return check_entry("lift", false, e.to_string()),
        }
    }
    check_entry(
        "lift",
        true,
        format!("all components zero for {rounds} seeded g"),
    )
}

fn run_verify(
    instance: &Instance,
    checks: &str,
    seed: u64,
    samples: usize,
) -> Result<Vec<ResultEntry>, CliError> {
    let mut out = Vec::new();
    for check in checks.split(',').map(str::trim).filter(|c| !c.is_empty()) {
        match check {
            "d2" => out.push(check_d2(instance)),
            "steenrod" => out.push(check_steenrod(instance)),
            "les" => out.push(check_les(instance)),
            "tu" => out.push(check_tu(seed)),
            "surjectivity" => {
                let setup = instance.setup.as_ref().ok_or_else(|| {
                    CliError::Schema(
                        "surjectivity check needs a standard setup in the instance".to_string(),
                    )
                })?;
                out.push(check_surjectivity(setup, seed, samples));
            }
            "lift" => {
                let setup = instance.setup.as_ref().ok_or_else(|| {
                    CliError::Schema(
                        "lift check needs a standard setup in the instance".to_string(),
                    )
                })?;
                out.push(check_lift(setup, seed, 5));
            }
            other => {
                return Err(CliError::Schema(format!("unknown check {other:?}")));
            }
        }
    }
    if out.is_empty() {
        return Err(CliError::Schema("no checks requested".to_string()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Examples
// ---------------------------------------------------------------------------

fn nerve_to_spec_facets(nerve: &Nerve) -> NerveSpec {
    let top = nerve.max_dim();
    let mut facets = Vec::new();
    // Maximal simplices suffice; emit top-dimensional ones plus any lower
    // simplices not contained in a higher facet.
    for dim in (0..=top).rev() {
        for s in nerve.simplices(dim) {
            let verts: Vec<u32> = s.vertices().iter().map(|v| v.0).collect();
            let contained = facets
                .iter()
                .any(|f: &Vec<u32>| verts.iter().all(|v| f.contains(v)));
            if !contained {
                facets.push(verts);
            }
        }
    }
    facets.sort();
    NerveSpec { facets }
}

fn run_example(
    name: &str,
    k: Option<i64>,
    euler: Option<String>,
    seed: u64,
) -> Result<InstanceFile, CliError> {
    let build = |nerve: &Nerve,
                 twist: &TwistCocycle,
                 setup: Option<&StandardSetup>|
     -> Result<InstanceFile, CliError> {
        Ok(InstanceFile {
            schema: INSTANCE_SCHEMA.to_string(),
            name: Some(name.to_string()),
            nerve: nerve_to_spec_facets(nerve),
            twist: twist_to_spec(twist).map_err(CliError::from)?,
            setup: setup.map(setup_to_spec),
        })
    };
    match name {
        "hopf" => {
            let (nerve, twist) = fixtures::hopf();
            build(&nerve, &twist, None)
        }
        "lens" => {
            let (nerve, twist) = fixtures::lens(k.unwrap_or(2));
            build(&nerve, &twist, None)
        }
        "t3" => {
            let (nerve, twist, setup) = fixtures::t3(seed);
            build(&nerve, &twist, Some(&setup))
        }
        "nilmanifold" => {
            let (nerve, twist) = fixtures::nilmanifold(k.unwrap_or(1));
            build(&nerve, &twist, None)
        }
        "s2-rank2" => {
            let (a, b) = match euler {
                Some(text) => {
                    let parts: Vec<i64> = text
                        .split(',')
                        .map(|p| p.trim().parse())
                        .collect::<Result<_, _>>()
                        .map_err(|_| CliError::Schema(format!("bad --euler value {text:?}")))?;
                    if parts.len() != 2 {
                        return Err(CliError::Schema(
                            "--euler expects two components `a,b`".to_string(),
                        ));
                    }
                    (parts[0], parts[1])
                }
                None => (2, 0),
            };
            let (nerve, twist) = fixtures::s2_rank2(a, b);
            build(&nerve, &twist, None)
        }
        "torus-nerve" => {
            let setup = fixtures::torus_setup(2, seed);
            let nerve = setup.nerve.clone();
            let twist = setup.twist().clone();
            build(&nerve, &twist, Some(&setup))
        }
        other => Err(CliError::Schema(format!("unknown example {other:?}"))),
    }
}

// ---------------------------------------------------------------------------

fn run(cli: Cli) -> Result<(String, u8), CliError> {
    match cli.command {
        Command::Compute {
            instance,
            degree,
            coeff,
        } => {
            let inst = load_instance(&instance)?;
            let degrees = parse_degrees(&degree)?;
            let ring = json::ring_from_str(&coeff)
                .ok_or_else(|| CliError::Schema(format!("unknown coefficients {coeff:?}")))?;
            let results = run_compute(&inst, degrees, ring)?;
            let report = Report {
                schema: REPORT_SCHEMA,
                tool_version: env!("CARGO_PKG_VERSION"),
                input_digest: Some(inst.digest.clone()),
                seed: None,
                status: "pass",
                results,
            };
            Ok((report.render(cli.format), 0))
        }
        Command::Verify {
            instance,
            checks,
            seed,
            samples,
        } => {
            let inst = load_instance(&instance)?;
            let results = run_verify(&inst, &checks, seed, samples)?;
            let failed = results
                .iter()
                .any(|r| matches!(r, ResultEntry::Check { status: "fail", .. }));
            let report = Report {
                schema: REPORT_SCHEMA,
                tool_version: env!("CARGO_PKG_VERSION"),
                input_digest: Some(inst.digest.clone()),
                seed: Some(seed),
                status: if failed { "fail" } else { "pass" },
                results,
            };
            Ok((report.render(cli.format), u8::from(failed)))
        }
        Command::Example {
            name,
            k,
            euler,
            seed,
            out,
        } => {
            let instance = run_example(&name, k, euler, seed)?;
            let text = serde_json::to_string_pretty(&instance)
                .map_err(|e| CliError::Schema(e.to_string()))?;
            if let Some(path) = out {
                std::fs::write(&path, text.as_bytes()).map_err(|e| {
                    CliError::Schema(format!("cannot write {}: {e}", path.display()))
                })?;
                Ok((format!("wrote {}", path.display()), 0))
            } else {
                Ok((text, 0))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((output, code)) => {
            println!("{output}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
