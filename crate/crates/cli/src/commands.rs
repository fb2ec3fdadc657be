use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;

use ample_core::comparison::{
    auto_compare, run_exhaustion_comparison, run_m_comparison, verify_witness, AutoOptions, SubequivalenceWitness,
    WitnessDoc,
};
use ample_core::convolution::{i_norm, i_norm_exact, reduced_norm, FunctionDoc, GroupoidFunction};
use ample_core::groupoid::{build_from_spec, decompose_into_bisections, GroupoidSpec};
use ample_core::growth::{
    ball, check_source_surjection, estimate_ord, folner_index, folner_ratio, growth_function, OrbitalGraph,
};
use ample_core::measure::{
    banach_lower_density, banach_upper_density, fiber_normalized_ball, invariance_defect, invariant_measures,
    measure_range, rho, verify_density_certificate, MeasureDoc, PointMeasure,
};
use ample_core::rational;
use ample_core::{ClopenSet, DyadicRadius, Error, FiniteGroupoid, Limits, Word};

use crate::{CliError, Common};

type Result<T> = std::result::Result<T, CliError>;

fn io(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Spec(format!("{}: {e}", path.display())).into())
}

fn with_depth(spec: GroupoidSpec, depth: u32) -> GroupoidSpec {
    match spec {
        GroupoidSpec::Transformation(mut t) => {
            t.depth = depth;
            GroupoidSpec::Transformation(t)
        }
        GroupoidSpec::Bratteli(mut b) => {
            b.depth = depth;
            GroupoidSpec::Bratteli(b)
        }
        GroupoidSpec::Pair { alphabet, .. } => GroupoidSpec::Pair { alphabet, depth },
        GroupoidSpec::GroupBundle { alphabet, order, .. } => GroupoidSpec::GroupBundle { alphabet, depth, order },
    }
}

fn load(common: &Common) -> Result<FiniteGroupoid> {
    let mut spec: GroupoidSpec = read_json(&common.spec)?;
    if let Some(d) = common.depth {
        spec = with_depth(spec, d);
    }
    Ok(build_from_spec(&spec, &Limits::default())?)
}

fn out_dir(common: &Common) -> Result<Option<PathBuf>> {
    match &common.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
            Ok(Some(dir.clone()))
        }
        None => Ok(None),
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| io(&path, e))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    write_file(dir, name, &text)
}

fn write_csv<R: Serialize>(dir: &Path, name: &str, rows: impl IntoIterator<Item = R>) -> Result<()> {
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    for row in rows {
        w.serialize(row).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    }
    w.flush().map_err(|e| io(&path, e))
}

fn parse_set(g: &FiniteGroupoid, expr: &str) -> Result<ClopenSet> {
    Ok(ClopenSet::parse_expr(g.space(), expr)?)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

#[derive(Serialize)]
struct ArrowRow {
    id: u32,
    source: String,
    range: String,
    label: String,
    #[serde(rename = "in_K")]
    in_k: bool,
}

pub fn build(common: &Common) -> Result<String> {
    let g = load(common)?;
    let axioms = g.check_axioms(Limits::default().exhaustive_triples)?;
    let iso = g.isotropy_and_quotient()?;
    let mut out = String::new();
    writeln!(
        out,
        "{} units, {} arrows, principal: {}",
        g.space().len(),
        g.arrow_count(),
        yes(g.is_principal())
    )
    .unwrap();
    writeln!(out, "kind: {}", g.kind()).unwrap();
    writeln!(out, "|K|: {}", g.generators().len()).unwrap();
    writeln!(out, "isotropy arrows: {}", iso.isotropy.arrow_count()).unwrap();
    writeln!(out, "orbits: {}", g.orbits().len()).unwrap();
    match g.check_generation() {
        Ok(()) => writeln!(out, "generated by K: yes, max word length {}", g.max_word_length()).unwrap(),
        Err(e) => writeln!(out, "generated by K: no ({e})").unwrap(),
    }
    writeln!(
        out,
        "axioms: ok ({} composable pairs, {} triples, {})",
        axioms.composable_pairs,
        axioms.triples_checked,
        if axioms.exhaustive { "exhaustive" } else { "sampled" }
    )
    .unwrap();
    if let Some(dir) = out_dir(common)? {
        write_csv(
            &dir,
            "arrows.csv",
            g.arrow_table().into_iter().map(|(id, source, range, label, in_k)| ArrowRow {
                id,
                source,
                range,
                label,
                in_k,
            }),
        )?;
        write_file(&dir, "summary.txt", &out)?;
    }
    Ok(out)
}

#[derive(Serialize)]
struct GrowthRow {
    n: usize,
    gamma: usize,
}

pub fn growth(common: &Common, nmax: usize) -> Result<String> {
    let g = load(common)?;
    let profile = growth_function(&g, nmax)?;
    let table: Vec<String> = profile.table.iter().map(usize::to_string).collect();
    let mut out = format!("growth: {}\n", table.join(","));
    match profile.saturation_n {
        Some(n) => writeln!(out, "saturation: n = {n}").unwrap(),
        None => writeln!(out, "saturation: none within n <= {nmax}").unwrap(),
    }
    match estimate_ord(&profile, None) {
        Ok(est) => writeln!(
            out,
            "ord estimate: {:.3} (heuristic; window [{}, {}], offset {:.3})",
            est.slope, est.window.0, est.window.1, est.offset
        )
        .unwrap(),
        Err(e) => writeln!(out, "ord estimate: unavailable ({e})").unwrap(),
    }
    if let Some(dir) = out_dir(common)? {
        write_csv(
            &dir,
            "growth.csv",
            profile.table.iter().enumerate().map(|(n, &gamma)| GrowthRow { n, gamma }),
        )?;
    }
    Ok(out)
}

#[derive(Serialize)]
struct OrbitalRow {
    point: String,
    n: u32,
    cayley_ball: usize,
    orbital_ball: usize,
    surjective: bool,
}

pub fn orbital(common: &Common, nmax: u32, point: Option<&str>) -> Result<String> {
    use rayon::prelude::*;
    let g = load(common)?;
    let graph = OrbitalGraph::new(&g);
    let points: Vec<Word> = match point {
        Some(p) => vec![g.space().parse_word(p)?],
        None => g.space().points().collect(),
    };
    let rows = points
        .par_iter()
        .map(|&x| {
            (0..=nmax)
                .map(|n| {
                    let r = check_source_surjection(&g, &graph, x, n)?;
                    Ok(OrbitalRow {
                        point: g.space().format(x),
                        n,
                        cayley_ball: r.cayley_ball,
                        orbital_ball: r.orbital_ball,
                        surjective: r.surjective,
                    })
                })
                .collect::<std::result::Result<Vec<_>, Error>>()
        })
        .collect::<std::result::Result<Vec<_>, Error>>()?;
    let rows: Vec<OrbitalRow> = rows.into_iter().flatten().collect();
    let mut out = String::new();
    for r in &rows {
        writeln!(
            out,
            "{} n={} |B_Orb|={} |B_Cay|={} surjective={}",
            r.point,
            r.n,
            r.orbital_ball,
            r.cayley_ball,
            yes(r.surjective)
        )
        .unwrap();
    }
    writeln!(out, "checked {} (point, radius) pairs: all surjective", rows.len()).unwrap();
    if let Some(dir) = out_dir(common)? {
        write_csv(&dir, "orbital.csv", rows)?;
    }
    Ok(out)
}

#[derive(Serialize)]
struct FolnerRow {
    n: u32,
    ratio: String,
}

pub fn folner(common: &Common, nmax: u32, threshold: &str) -> Result<String> {
    let g = load(common)?;
    let eps = rational::parse(threshold)?;
    let report = folner_index(&g, &eps, nmax)?;
    let rows: Vec<FolnerRow> = (0..=report.n)
        .map(|n| FolnerRow {
            n,
            ratio: rational::format(&folner_ratio(&g, n)),
        })
        .collect();
    let mut out = String::new();
    for r in &rows {
        writeln!(out, "n={} sup |K·B(n)x|/|B(n)x| = {}", r.n, r.ratio).unwrap();
    }
    writeln!(
        out,
        "folner index for epsilon {}: {} (ratio {})",
        rational::format(&eps),
        report.n,
        rational::format(&report.ratio)
    )
    .unwrap();
    if let Some(dir) = out_dir(common)? {
        write_csv(&dir, "folner.csv", rows)?;
    }
    Ok(out)
}

#[derive(Serialize)]
struct DensityRow {
    n: usize,
    fiber_sums_ok: bool,
    deficit: String,
    displacement: String,
    passes: bool,
}

pub fn density(common: &Common, nmax: u32, threshold: &str) -> Result<String> {
    let g = load(common)?;
    g.check_generation()?;
    let eps = rational::parse(threshold)?;
    let mut seq = Vec::new();
    let mut rows = Vec::new();
    for n in 0..=nmax {
        seq.push(fiber_normalized_ball(&g, n));
        let r = verify_density_certificate(&g, &seq, g.generators(), &eps)?;
        rows.push(DensityRow {
            n: r.n,
            fiber_sums_ok: r.fiber_sums_ok,
            deficit: rational::format(&r.deficit),
            displacement: rational::format(&r.displacement),
            passes: r.passes,
        });
    }
    let mut out = String::new();
    for r in &rows {
        writeln!(
            out,
            "n={} deficit={} displacement={} fiber_sums<=1: {} passes: {}",
            r.n,
            r.deficit,
            r.displacement,
            yes(r.fiber_sums_ok),
            yes(r.passes)
        )
        .unwrap();
    }
    if let Some(dir) = out_dir(common)? {
        write_csv(&dir, "density.csv", rows)?;
    }
    Ok(out)
}

pub fn measure_check(common: &Common, measure: Option<&Path>, set: Option<&str>, nmax: u32) -> Result<String> {
    let g = load(common)?;
    let vertices = invariant_measures(&g)?;
    let mut out = format!("invariant measure vertices: {}\n", vertices.len());
    for (i, mu) in vertices.iter().enumerate() {
        let support: Vec<String> = g
            .space()
            .points()
            .filter(|&x| !num_traits::Zero::is_zero(mu.weight(x)))
            .map(|x| format!("{}:{}", g.space().format(x), rational::format(mu.weight(x))))
            .collect();
        writeln!(out, "  vertex {i}: {}", support.join(" ")).unwrap();
    }
    if let Some(path) = measure {
        let doc: MeasureDoc = read_json(path)?;
        let mu = PointMeasure::from_doc(g.space(), &doc)?;
        let defect = invariance_defect(&g, &mu)?;
        writeln!(out, "invariance defect: {}", rational::format(&defect)).unwrap();
    }
    if let Some(expr) = set {
        let a = parse_set(&g, expr)?;
        if let Some((lo, hi)) = measure_range(&vertices, &a) {
            writeln!(out, "mu({expr}) over M(G): [{}, {}]", rational::format(&lo), rational::format(&hi)).unwrap();
        }
        for n in 0..=nmax {
            writeln!(
                out,
                "n={n} upper={} lower={} rho={}",
                rational::format(&banach_upper_density(&g, &a, n)),
                rational::format(&banach_lower_density(&g, &a, n)),
                rational::format(&rho(&g, n))
            )
            .unwrap();
        }
    }
    if let Some(dir) = out_dir(common)? {
        let docs: Vec<MeasureDoc> = vertices.iter().map(PointMeasure::to_doc).collect();
        write_json(&dir, "invariant_measures.json", &docs)?;
        write_file(&dir, "measure_report.txt", &out)?;
    }
    Ok(out)
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub common: Common,
    /// Set to be compared, e.g. "[00]".
    #[arg(long = "A")]
    pub a: String,
    /// Target set, e.g. "[1]".
    #[arg(long = "B")]
    pub b: String,
    /// Choose N, M, m and D from the growth profile.
    #[arg(long)]
    pub auto: bool,
    /// The comparison multiplicity m (ignored with --auto).
    #[arg(long)]
    pub m: Option<u64>,
    /// D is the word-length ball of this radius (ignored with --auto).
    #[arg(long)]
    pub radius: Option<u32>,
    /// Initial radius 2^-j; the resolution floor when omitted.
    #[arg(long)]
    pub epsilon: Option<u32>,
    /// Follow with the exhaustion algorithm to get a single-family witness.
    #[arg(long)]
    pub exhaust: bool,
    /// First N tried by --auto.
    #[arg(long, default_value_t = 1)]
    pub n_start: usize,
    /// Growth table length used by --auto.
    #[arg(long)]
    pub nmax: Option<usize>,
}

fn witness_summary(w: &SubequivalenceWitness) -> String {
    let sizes: Vec<String> = w.families.iter().map(|f| f.len().to_string()).collect();
    format!("{} families with [{}] bisections", w.families.len(), sizes.join(", "))
}

pub fn compare(args: &CompareArgs) -> Result<String> {
    let g = load(&args.common)?;
    let a = parse_set(&g, &args.a)?;
    let b = parse_set(&g, &args.b)?;
    let eps = args.epsilon.map(DyadicRadius::Pow).unwrap_or_else(|| g.space().floor_radius());
    let mut out = String::new();
    let (m, d, run) = if args.auto {
        let opts = AutoOptions {
            n_start: args.n_start,
            n_max: args.nmax,
            ord: None,
        };
        let auto = auto_compare(&g, &a, &b, &opts)?;
        writeln!(
            out,
            "auto: ord = {}, N = {}, M = {}, m = {}",
            rational::format(&auto.ord),
            auto.n,
            auto.big_m,
            auto.m
        )
        .unwrap();
        (auto.m, ball(&g, auto.big_m as u32), auto.run)
    } else {
        let m = args.m.ok_or_else(|| Error::Usage("--m is required without --auto".into()))?;
        let radius = args.radius.ok_or_else(|| Error::Usage("--radius is required without --auto".into()))?;
        let d = ball(&g, radius);
        let run = run_m_comparison(&g, &a, &b, &d, m, eps)?;
        (m, d, run)
    };
    writeln!(out, "m-comparison: M_D = {}, {} steps, {} injection checks", run.m_d, run.steps, run.injections_checked).unwrap();
    writeln!(out, "m-comparison witness: {}", witness_summary(&run.witness)).unwrap();
    let mut witness = run.witness;
    if args.exhaust {
        let cover = decompose_into_bisections(&g, &g.full_set());
        let ex = run_exhaustion_comparison(&g, &a, &b, &cover, m, &d, eps)?;
        writeln!(
            out,
            "exhaustion: base point {}, {} reserved, {} steps over {} cycles, {} gap checks, fallback: {}",
            g.space().format(ex.base_point),
            ex.reserved.len(),
            ex.loop_steps,
            ex.cycles,
            ex.gap_checks,
            yes(ex.fallback.is_some())
        )
        .unwrap();
        writeln!(out, "exhaustion witness: {}", witness_summary(&ex.witness)).unwrap();
        witness = ex.witness;
    }
    let dir = args.common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|e| io(&dir, e))?;
    write_json(&dir, "witness.json", &WitnessDoc::new(&g, &a, &b, &witness))?;
    let doc: WitnessDoc = read_json(&dir.join("witness.json"))?;
    let (a2, b2, w2) = doc.load(&g)?;
    let report = verify_witness(&g, &a2, &b2, &w2)?;
    if !report.passes {
        return Err(CliError::Rejected(report.failure.unwrap_or_default()));
    }
    writeln!(out, "wrote {}", dir.join("witness.json").display()).unwrap();
    writeln!(out, "VERIFIED").unwrap();
    Ok(out)
}

pub fn verify(common: &Common, witness: &Path) -> Result<String> {
    let g = load(common)?;
    let doc: WitnessDoc = read_json(witness)?;
    let (a, b, w) = doc.load(&g)?;
    let report = verify_witness(&g, &a, &b, &w)?;
    if let Some(dir) = out_dir(common)? {
        write_json(&dir, "verification.json", &report)?;
    }
    if !report.passes {
        return Err(CliError::Rejected(report.failure.unwrap_or_default()));
    }
    Ok(format!("{}\nVERIFIED\n", witness_summary(&w)))
}

pub fn norms(common: &Common, function: Option<&Path>, indicator: &str, tolerance: f64) -> Result<String> {
    let g = load(common)?;
    let f = match function {
        Some(path) => {
            let doc: FunctionDoc = read_json(path)?;
            GroupoidFunction::from_doc(&g, &doc)?
        }
        None => match indicator {
            "units" => GroupoidFunction::units(&g),
            "all" => GroupoidFunction::indicator(&g, &g.full_set()),
            "generators" => GroupoidFunction::indicator(&g, g.generators()),
            other => return Err(Error::Usage(format!("unknown indicator {other:?}")).into()),
        },
    };
    let mut out = String::new();
    match i_norm_exact(&g, &f) {
        Some(v) => writeln!(out, "i_norm: {}", rational::format(&v)).unwrap(),
        None => writeln!(out, "i_norm: {:.12}", i_norm(&g, &f)).unwrap(),
    }
    let est = reduced_norm(&g, &f, tolerance)?;
    writeln!(
        out,
        "reduced_norm: {:.12} (attained at {}, relative tolerance {tolerance:e})",
        est.norm,
        g.space().format(est.argmax)
    )
    .unwrap();
    if let Some(dir) = out_dir(common)? {
        write_file(&dir, "norms.txt", &out)?;
    }
    Ok(out)
}
