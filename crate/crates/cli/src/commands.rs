use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num::{BigInt, BigRational, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};

use lefschetz_core::contraction::{check_ma_properties, random_levi_pair, LeviPair, MaReport, Subspace, TorusDraw};
use lefschetz_core::euler::{central_extension_betti, chi, chi_r, covolume, verify_chichi, BettiVector};
use lefschetz_core::graph::{primitive_geodesics, EdgeCharacter, GeodesicGraph};
use lefschetz_core::lefschetz::{check_hecke, hecke_operator, verify_with_classes, Dictionary, LefschetzRow, Value};
use lefschetz_core::matrix::RatMatrix;
use lefschetz_core::padic::{default_degree_bound, has_root_of_unity_eigenvalue, AbsValueSpectrum, PadicContext};
use lefschetz_core::root_datum::{in_a_minus, Family, RootDatum};

use crate::input::{rationals, ParamFile};
use crate::report::Report;

pub enum Source {
    File(PathBuf),
    Random { cases: usize, seed: u64 },
}

pub enum Twist {
    Trivial,
    File(PathBuf),
    Random { count: usize, seed: u64 },
}

fn kv(k: &str, v: impl ToString) -> (String, String) {
    (k.to_string(), v.to_string())
}

fn spectrum_json(s: &AbsValueSpectrum) -> Json {
    Json::Array(
        s.iter()
            .map(|(v, m)| json!({ "valuation": v.to_string(), "multiplicity": m }))
            .collect(),
    )
}

fn context(q: u64) -> Result<PadicContext> {
    PadicContext::new(q).map_err(|e| anyhow!("{e}"))
}

fn random_unit(q: u64, rng: &mut ChaCha8Rng) -> BigInt {
    let mut u: i64 = rng.random_range(1..=30);
    while u % q as i64 == 0 {
        u += 1;
    }
    BigInt::from(u)
}

// newton

pub fn newton(source: Source) -> Result<Report> {
    match source {
        Source::File(path) => newton_file(&path),
        Source::Random { cases, seed } => newton_random(cases, seed),
    }
}

fn newton_file(path: &Path) -> Result<Report> {
    let params = ParamFile::read(path, &["q", "row", "degree-bound"])?;
    let q: u64 = params.scalar("q")?.ok_or_else(|| anyhow!("missing `q` field"))?;
    let ctx = context(q)?;
    let rows: Vec<Vec<BigRational>> =
        params.all("row").iter().map(|(line, args)| rationals(args, *line)).collect::<Result<_>>()?;
    let n = rows.len();
    if n == 0 {
        bail!("no `row` lines");
    }
    if let Some(bad) = rows.iter().position(|r| r.len() != n) {
        bail!("row {} has {} entries, expected {n} for a square matrix", bad + 1, rows[bad].len());
    }
    let bound: usize = params.scalar("degree-bound")?.unwrap_or_else(|| default_degree_bound(n));
    let g = RatMatrix::from_rows(rows);
    let spectrum = ctx.eigen_abs_values(&g).map_err(|e| anyhow!("{e}"))?;
    let ext = spectrum.lambda_min_max().map_err(|e| anyhow!("{e}"))?;
    let torsion = has_root_of_unity_eigenvalue(&g, bound).map_err(|e| anyhow!("{e}"))?;
    let matrix: Vec<Vec<String>> =
        (0..n).map(|i| g.row(i).iter().map(ToString::to_string).collect()).collect();
    let document = json!({
        "command": "newton",
        "q": q,
        "matrix": matrix,
        "charpoly": g.charpoly().to_string(),
        "valuations": spectrum_json(&spectrum),
        "lambda_min_exponent": ext.min_exp.to_string(),
        "lambda_max_exponent": ext.max_exp.to_string(),
        "degree_bound": bound,
        "root_of_unity_eigenvalue": torsion,
    });
    let rows = spectrum
        .iter()
        .map(|(v, m)| vec![v.to_string(), ctx.qpower(-v.clone()).to_string(), m.to_string()])
        .collect();
    Ok(Report {
        document,
        header: vec![
            kv("q", q),
            kv("charpoly", g.charpoly()),
            kv("lambda_min", format!("{q}^({})", ext.min_exp)),
            kv("lambda_max", format!("{q}^({})", ext.max_exp)),
            kv("root of unity eigenvalue", format!("{torsion} (orders up to {bound})")),
        ],
        columns: vec!["valuation", "abs_value", "multiplicity"],
        rows,
        pass: true,
    })
}

/// Conjugated diagonal matrices whose eigenvalue valuations are known.
fn newton_random(cases: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let q = [2u64, 3, 5][rng.random_range(0..3)];
        let ctx = context(q)?;
        let n = rng.random_range(1..=5);
        let vals: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
        let diag: Vec<BigRational> =
            vals.iter().map(|&v| ctx.power(v) * BigRational::from_integer(random_unit(q, &mut rng))).collect();
        let p = loop {
            let rows = (0..n)
                .map(|_| (0..n).map(|_| BigRational::from_integer(rng.random_range(-4i64..=4).into())).collect())
                .collect();
            let p = RatMatrix::from_rows(rows);
            if !p.det().is_zero() {
                break p;
            }
        };
        let g = &(&p * &RatMatrix::from_diagonal(&diag)) * &p.inverse().expect("invertible by construction");
        let expect = AbsValueSpectrum::from_valuations(vals.iter().map(|&v| BigRational::from_integer(v.into())));
        let got = ctx.eigen_abs_values(&g).map_err(|e| anyhow!("{e}"))?;
        if got != expect {
            failures.push(vec![case.to_string(), q.to_string(), n.to_string(), expect.to_string(), got.to_string()]);
        }
    }
    random_summary("newton", cases, seed, failures, vec!["case", "q", "n", "expected", "got"])
}

fn random_summary(
    command: &str,
    cases: usize,
    seed: u64,
    failures: Vec<Vec<String>>,
    columns: Vec<&'static str>,
) -> Result<Report> {
    let passed = cases - failures.len();
    let failure_docs: Vec<Json> = failures
        .iter()
        .map(|row| Json::Object(columns.iter().zip(row).map(|(c, v)| (c.to_string(), json!(v))).collect()))
        .collect();
    Ok(Report {
        document: json!({
            "command": command,
            "mode": "random",
            "seed": seed,
            "cases": cases,
            "passed": passed,
            "failures": failure_docs,
        }),
        header: vec![kv("seed", seed), kv("passed", format!("{passed}/{cases}"))],
        columns,
        rows: failures,
        pass: passed == cases,
    })
}

// region

pub fn region(source: Source) -> Result<Report> {
    match source {
        Source::File(path) => region_file(&path),
        Source::Random { cases, seed } => region_random(cases, seed),
    }
}

fn parse_family(args: &[String], line: usize) -> Result<RootDatum> {
    let rd = match args {
        [f, n] if f.eq_ignore_ascii_case("gl") || f.eq_ignore_ascii_case("sl") => {
            let n: usize = n.parse().map_err(|_| anyhow!("line {line}: rank `{n}` is not an integer"))?;
            let family = if f.eq_ignore_ascii_case("gl") { Family::Gl } else { Family::Sl };
            RootDatum::new(family, n)
        }
        [f] | [f, _] if f.eq_ignore_ascii_case("pgl2") => Ok(RootDatum::pgl2()),
        _ => bail!("line {line}: expected `family GL <n>`, `family SL <n>` or `family PGL2`"),
    };
    rd.map_err(|e| anyhow!("line {line}: {e}"))
}

fn region_file(path: &Path) -> Result<Report> {
    let params = ParamFile::read(path, &["q", "family", "a", "m"])?;
    let q: u64 = params.scalar("q")?.ok_or_else(|| anyhow!("missing `q` field"))?;
    let ctx = context(q)?;
    let (line, fam) = params.required("family")?;
    let rd = parse_family(fam, line)?;
    let (line, a) = params.required("a")?;
    let a = rationals(a, line)?;
    let m = match params.single("m")? {
        Some((line, m)) => RatMatrix::from_diagonal(&rationals(m, line)?),
        None => RatMatrix::identity(rd.n()),
    };
    let pair = LeviPair::new(ctx, rd.clone(), &a, m).map_err(|e| anyhow!("{e}"))?;
    let err = |e: lefschetz_core::contraction::ContractionError| anyhow!("{e}");

    let subspaces = [("n", Subspace::N), ("nbar", Subspace::NBar), ("g", Subspace::G), ("a+m+n", Subspace::AMN)];
    let mut spectra = serde_json::Map::new();
    let mut rows = Vec::new();
    for (name, sub) in subspaces {
        let s = pair.adjoint_spectrum(sub).map_err(err)?;
        spectra.insert(name.to_string(), spectrum_json(&s));
        rows.extend(s.iter().map(|(v, mult)| vec![name.to_string(), v.to_string(), mult.to_string()]));
    }
    let lambda = pair.lambda_am().map_err(err)?;
    let inside = pair.in_am_tilde().map_err(err)?;
    let a_minus = in_a_minus(pair.a(), &rd);
    let elliptic = pair.is_elliptic_model();
    let (det_doc, det_ok, det_text) = match pair.det_identity() {
        Ok(id) => (
            json!({ "lhs": id.lhs.to_string(), "rhs": id.rhs.to_string(), "holds": id.holds() }),
            id.holds(),
            format!("{} = {}: {}", id.lhs, id.rhs, id.holds()),
        ),
        Err(e) => (json!({ "skipped": e.to_string() }), true, format!("skipped ({e})")),
    };
    let ma = check_ma_properties(std::slice::from_ref(&pair)).map_err(err)?;
    let document = json!({
        "command": "region",
        "q": q,
        "family": rd.name(),
        "a_valuations": pair.a().valuations(),
        "spectra": spectra,
        "lambda_exponent": lambda.to_string(),
        "in_am_tilde": inside,
        "a_in_a_minus": a_minus,
        "m_elliptic": elliptic,
        "det_identity": det_doc,
        "ma_failures": ma_failures(&ma),
    });
    Ok(Report {
        document,
        header: vec![
            kv("group", rd.name()),
            kv("v(a)", format!("{:?}", pair.a().valuations())),
            kv("lambda(am)", format!("{q}^({lambda})")),
            kv("in (AM)~", inside),
            kv("a in A^-", a_minus),
            kv("m elliptic", elliptic),
            kv("det identity", det_text),
            kv("MA failures", ma.failures.len()),
        ],
        columns: vec!["subspace", "valuation", "multiplicity"],
        rows,
        pass: det_ok && ma.passed(),
    })
}

fn ma_failures(ma: &MaReport) -> Json {
    Json::Array(
        ma.failures
            .iter()
            .map(|f| json!({ "sample": f.sample, "property": format!("{:?}", f.property), "detail": f.detail }))
            .collect(),
    )
}

/// Alternates elliptic samples in A^- (determinant identity) with unconstrained
/// samples (the (AM)~ structure properties).
fn region_random(cases: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(cases);
    let mut det_checked = 0;
    let mut failures = Vec::new();
    for case in 0..cases {
        let q = [2u64, 3, 5][rng.random_range(0..3)];
        let rd = RootDatum::gl(rng.random_range(2..=3)).map_err(|e| anyhow!("{e}"))?;
        let draw = if case % 2 == 0 { TorusDraw::AMinus } else { TorusDraw::Any };
        let p = random_levi_pair(context(q)?, &rd, draw, case % 2 == 0 || rng.random_bool(0.5), &mut rng);
        if draw == TorusDraw::AMinus {
            det_checked += 1;
            let id = p.det_identity().map_err(|e| anyhow!("{e}"))?;
            if !id.holds() {
                failures.push(vec![case.to_string(), "DetIdentity".into(), format!("{} vs {}", id.lhs, id.rhs)]);
            }
        }
        samples.push(p);
    }
    let ma = check_ma_properties(&samples).map_err(|e| anyhow!("{e}"))?;
    for f in &ma.failures {
        failures.push(vec![f.sample.to_string(), format!("{:?}", f.property), f.detail.clone()]);
    }
    let pass = failures.is_empty();
    let failure_docs: Vec<Json> =
        failures.iter().map(|r| json!({ "sample": r[0], "property": r[1], "detail": r[2] })).collect();
    Ok(Report {
        document: json!({
            "command": "region",
            "mode": "random",
            "seed": seed,
            "cases": cases,
            "det_identity_checked": det_checked,
            "premise_contains": ma.premise_contains,
            "in_region": ma.in_region,
            "outside_a_minus": ma.outside_a_minus,
            "failures": failure_docs,
        }),
        header: vec![
            kv("seed", seed),
            kv("samples", cases),
            kv("determinant identities checked", det_checked),
            kv("a in A^- and m elliptic", ma.premise_contains),
            kv("inside (AM)~", ma.in_region),
            kv("a outside A^-", ma.outside_a_minus),
            kv("failures", failures.len()),
        ],
        columns: vec!["sample", "property", "detail"],
        rows: failures,
        pass,
    })
}

// euler

pub fn euler(source: Source) -> Result<Report> {
    match source {
        Source::File(path) => euler_file(&path),
        Source::Random { cases, seed } => euler_random(cases, seed),
    }
}

fn euler_file(path: &Path) -> Result<Report> {
    let params = ParamFile::read(path, &["betti", "r", "lambda", "split-rank"])?;
    let (line, b) = params.required("betti")?;
    let b: Vec<u64> = b
        .iter()
        .map(|x| x.parse().map_err(|_| anyhow!("line {line}: Betti number `{x}` is not a nonnegative integer")))
        .collect::<Result<_>>()?;
    let b = BettiVector::from(b);
    let r: usize = params.scalar("r")?.unwrap_or(0);
    let split_rank: u32 = params.scalar("split-rank")?.unwrap_or(1);
    let lambda = match params.single("lambda")? {
        Some((line, [x])) => Some(crate::input::rational(x, line)?),
        Some((line, _)) => bail!("line {line}: `lambda` takes exactly one value"),
        None => None,
    };
    let ext = central_extension_betti(&b, r);
    let check = verify_chichi(&b, r);
    let vol = lambda.as_ref().map(|l| covolume(l, split_rank, r, &ext));
    let columns = vec!["r", "chi_r(base)", "chi_r(extension)"];
    let rows = (0..=r)
        .map(|s| vec![s.to_string(), chi_r(&b, s).to_string(), chi_r(&ext, s).to_string()])
        .collect();
    Ok(Report {
        document: json!({
            "command": "euler",
            "betti": b.entries().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "r": r,
            "chi": chi(&b).to_string(),
            "extension_betti": ext.entries().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "extension_chi_r": check.extension_chi_r.to_string(),
            "chichi_holds": check.holds(),
            "covolume": vol.as_ref().map(ToString::to_string),
            "split_rank": split_rank,
        }),
        header: vec![
            kv("betti", &b),
            kv("chi", chi(&b)),
            kv("extension betti", &ext),
            kv(&format!("chi_{r}(extension)"), &check.extension_chi_r),
            kv("chichi identity", check.holds()),
            kv("covolume", vol.map_or("-".to_string(), |v| v.to_string())),
        ],
        columns,
        rows,
        pass: check.holds(),
    })
}

fn euler_random(cases: usize, seed: u64) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for case in 0..cases {
        let b = BettiVector::random(&mut rng, 10, 20);
        let r = rng.random_range(1..=4);
        let c = verify_chichi(&b, r);
        if !c.holds() {
            failures.push(vec![case.to_string(), b.to_string(), r.to_string(), c.base_chi.to_string(), c.extension_chi_r.to_string()]);
        }
    }
    random_summary("euler", cases, seed, failures, vec!["case", "betti", "r", "chi", "chi_r(extension)"])
}

// graphs

fn load_graph(path: &Path) -> Result<(GeodesicGraph, Json)> {
    let loaded = GeodesicGraph::load(path).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    let g = loaded.graph;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let summary = json!({
        "name": name,
        "path": path.display().to_string(),
        "vertices": g.vertex_count(),
        "undirected_edges": g.undirected_edge_count(),
        "directed_edges": g.directed_edge_count(),
        "warnings": loaded.warnings.iter().map(ToString::to_string).collect::<Vec<_>>(),
    });
    Ok((g, summary))
}

fn value_json(v: &Value) -> Json {
    match v {
        Value::Exact(n) => match n.to_i64() {
            Some(x) => json!(x),
            None => json!(n.to_string()),
        },
        Value::Approx(z) => json!({ "re": z.re, "im": z.im }),
    }
}

fn row_json(r: &LefschetzRow, character: Option<usize>) -> Json {
    let mut obj = json!({
        "m": r.m,
        "geometric": value_json(&r.geometric),
        "transfer_trace": value_json(&r.transfer_trace),
        "spectral_from_adjacency": r.spectral_from_adjacency.as_ref().map(|s| value_json(&Value::Exact(s.clone()))),
        "pass": r.pass,
    });
    if let Some(k) = character {
        obj["character"] = json!(k);
    }
    obj
}

fn dictionary_json(d: &Dictionary) -> Json {
    json!({
        "lambda_convention": d.lambda_convention,
        "split_rank": d.split_rank,
        "centralizer_rank": d.centralizer_rank,
        "chi1": d.chi1.to_string(),
        "sign": d.sign,
        "sigma_trace": d.sigma_trace,
        "test_function": d.test_function,
        "tolerance": d.tolerance,
    })
}

pub fn lefschetz(path: &Path, m_max: usize, twist: Twist) -> Result<Report> {
    let (g, summary) = load_graph(path)?;
    let primitives = primitive_geodesics(&g, m_max);
    let characters: Vec<(Option<usize>, EdgeCharacter)> = match twist {
        Twist::Trivial => vec![(None, EdgeCharacter::trivial(&g))],
        Twist::File(p) => {
            let text = std::fs::read_to_string(&p).with_context(|| format!("cannot read {}", p.display()))?;
            let omega = EdgeCharacter::parse(&g, &text).map_err(|e| anyhow!("{}: {e}", p.display()))?;
            vec![(None, omega)]
        }
        Twist::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..count).map(|k| (Some(k), EdgeCharacter::random(&g, &mut rng))).collect()
        }
    };
    let mut rows_json = Vec::new();
    let mut rows = Vec::new();
    let mut pass = true;
    let mut dictionary = Dictionary::standard();
    for (k, omega) in &characters {
        let report = verify_with_classes(&g, &primitives, m_max, omega);
        pass &= report.passed();
        dictionary = report.dictionary.clone();
        for r in &report.rows {
            rows_json.push(row_json(r, *k));
            let mut cells = vec![
                r.m.to_string(),
                r.geometric.to_string(),
                r.transfer_trace.to_string(),
                r.spectral_from_adjacency.as_ref().map_or("-".into(), ToString::to_string),
                if r.pass { "pass" } else { "FAIL" }.to_string(),
            ];
            if let Some(k) = k {
                cells.insert(0, k.to_string());
            }
            rows.push(cells);
        }
    }
    let mut columns = vec!["m", "geometric", "transfer_trace", "spectral_from_adjacency", "pass"];
    if matches!(characters.first(), Some((Some(_), _))) {
        columns.insert(0, "character");
    }
    Ok(Report {
        document: json!({
            "graph": summary,
            "q": g.q(),
            "rows": rows_json,
            "dictionary": dictionary_json(&dictionary),
        }),
        header: vec![
            kv("graph", summary["name"].as_str().unwrap_or("")),
            kv("q", g.q()),
            kv("vertices", g.vertex_count()),
            kv("edges", g.undirected_edge_count()),
            kv("characters", characters.len()),
            kv("lambda", dictionary.lambda_convention),
            kv("chi_1", &dictionary.chi1),
            kv("sign", dictionary.sign),
        ],
        columns,
        rows,
        pass,
    })
}

pub fn hecke(path: &Path, m_max: usize) -> Result<Report> {
    let (g, summary) = load_graph(path)?;
    let report = check_hecke(&g, m_max);
    let mut rows_json = Vec::new();
    let mut rows = Vec::new();
    for r in &report.rows {
        let a = hecke_operator(&g, r.m);
        let charpoly = a.charpoly().to_string();
        rows_json.push(json!({
            "m": r.m,
            "recurrence": r.recurrence,
            "spectral_mapping": r.spectral_mapping,
            "trace": a.trace().to_string(),
            "charpoly": charpoly,
        }));
        rows.push(vec![
            r.m.to_string(),
            r.recurrence.to_string(),
            r.spectral_mapping.to_string(),
            a.trace().to_string(),
            charpoly,
        ]);
    }
    Ok(Report {
        document: json!({ "graph": summary, "q": g.q(), "rows": rows_json }),
        header: vec![kv("graph", summary["name"].as_str().unwrap_or("")), kv("q", g.q())],
        columns: vec!["m", "recurrence", "spectral_mapping", "trace", "charpoly"],
        rows,
        pass: report.passed(),
    })
}
