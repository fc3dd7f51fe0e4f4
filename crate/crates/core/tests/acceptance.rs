//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lefschetz_core::contraction::{check_ma_properties, random_levi_pair, TorusDraw};
use lefschetz_core::euler::{chi_r, covolume, verify_chichi, BettiVector};
use lefschetz_core::graph::{primitive_geodesics, EdgeCharacter, GeodesicGraph};
use lefschetz_core::lefschetz::{
    check_hecke, geometric_side_from_classes, hecke_operator, hecke_polynomial, verify_with_classes, Value,
    TWIST_TOLERANCE,
};
use lefschetz_core::matrix::{IntMatrix, RatMatrix};
use lefschetz_core::padic::{AbsValueSpectrum, PadicContext, Valuation};
use lefschetz_core::root_datum::{in_a_minus, RootDatum};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

const BUNDLED: [&str; 5] = ["k4", "k33", "petersen", "cube3", "circulant12"];

fn graphs() -> Vec<(&'static str, GeodesicGraph)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../graphs");
    BUNDLED
        .iter()
        .map(|name| {
            let path = dir.join(format!("{name}.graph"));
            let loaded = GeodesicGraph::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            (*name, loaded.graph)
        })
        .collect()
}

// Independent oracles

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// b'_p = Σ_k C(r, k) b_{p−k}: Künneth with the binomial row of ℤ^r.
fn oracle_extension(b: &[i128], r: usize) -> Vec<i128> {
    let mut out = vec![0i128; b.len() + r];
    for (p, &bp) in b.iter().enumerate() {
        for k in 0..=r {
            out[p + k] += binomial(r, k) * bp;
        }
    }
    out
}

fn oracle_chi_r(b: &[i128], r: usize) -> i128 {
    b.iter()
        .enumerate()
        .map(|(p, &bp)| if (p + r).is_multiple_of(2) { 1 } else { -1 } * binomial(p, r) * bp)
        .sum()
}

/// Closed non-backtracking walks of length m by explicit depth-first search.
fn oracle_closed_walks(g: &GeodesicGraph, m: usize) -> u64 {
    fn dfs(g: &GeodesicGraph, first: usize, last: usize, left: usize) -> u64 {
        if left == 0 {
            return u64::from(g.is_successor(last, first));
        }
        g.successors(last).map(|f| dfs(g, first, f, left - 1)).sum()
    }
    (0..g.directed_edge_count()).map(|e| dfs(g, e, e, m - 1)).sum()
}

fn oracle_twisted_walks(g: &GeodesicGraph, omega: &EdgeCharacter, m: usize) -> Complex64 {
    fn dfs(g: &GeodesicGraph, w: &EdgeCharacter, first: usize, last: usize, left: usize, acc: Complex64) -> Complex64 {
        if left == 0 {
            return if g.is_successor(last, first) { acc } else { Complex64::zero() };
        }
        g.successors(last).map(|f| dfs(g, w, first, f, left - 1, acc * w.weight(f))).sum()
    }
    (0..g.directed_edge_count()).map(|e| dfs(g, omega, e, e, m - 1, omega.weight(e))).sum()
}

fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> RatMatrix {
    loop {
        let rows = (0..n)
            .map(|_| (0..n).map(|_| BigRational::from_integer(BigInt::from(rng.random_range(-4i64..=4)))).collect())
            .collect();
        let p = RatMatrix::from_rows(rows);
        if !p.det().is_zero() {
            return p;
        }
    }
}

// Criteria

fn chichi_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut ok = 0;
    for _ in 0..1000 {
        let b = BettiVector::random(&mut rng, 10, 20);
        let r = rng.random_range(1..=4);
        let raw: Vec<i128> = b.entries().iter().map(|x| x.to_string().parse().unwrap()).collect();
        let oracle = oracle_chi_r(&raw, 0) == oracle_chi_r(&oracle_extension(&raw, r), r);
        if verify_chichi(&b, r).holds() && oracle {
            ok += 1;
        }
    }
    let free_ok = (0..=6).all(|r| chi_r(&BettiVector::free_abelian(r), r) == BigInt::one());
    outcome(ok == 1000 && free_ok, format!("{ok}/1000 identities, chi_r(Z^r) = 1 for r <= 6: {free_ok}"))
}

fn newton_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ok = 0;
    for _ in 0..500 {
        let q = [2u64, 3, 5][rng.random_range(0..3)];
        let ctx = PadicContext::new(q).unwrap();
        let n = rng.random_range(1..=5);
        let vals: Vec<i64> = (0..n).map(|_| rng.random_range(-3..=3)).collect();
        let diag: Vec<BigRational> = vals
            .iter()
            .map(|&v| {
                let mut unit: i64 = rng.random_range(1..=30);
                while unit % q as i64 == 0 {
                    unit += 1;
                }
                ctx.power(v) * BigRational::from_integer(BigInt::from(unit))
            })
            .collect();
        let p = random_invertible(n, &mut rng);
        let g = &(&p * &RatMatrix::from_diagonal(&diag)) * &p.inverse().unwrap();
        let expect = AbsValueSpectrum::from_valuations(vals.iter().map(|&v| BigRational::from_integer(v.into())));
        if ctx.eigen_abs_values(&g).ok() == Some(expect) {
            ok += 1;
        }
    }
    outcome(ok == 500, format!("{ok}/500 conjugated diagonal spectra recovered"))
}

fn det_identity_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut ok = 0;
    for k in 0..500 {
        let n = 2 + k % 2;
        let q = [2u64, 3, 5][rng.random_range(0..3)];
        let ctx = PadicContext::new(q).unwrap();
        let rd = RootDatum::gl(n).unwrap();
        let p = random_levi_pair(ctx, &rd, TorusDraw::AMinus, true, &mut rng);
        let Ok(id) = p.det_identity() else { continue };
        // oracle: Ad(am) is diagonal on e_ij with eigenvalue d_i/d_j
        let d = p.am().diagonal();
        let mut det = BigRational::one();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    det *= BigRational::one() - &d[i] / &d[j];
                }
            }
        }
        let Valuation::Finite(vdet) = ctx.valuation(&det) else { continue };
        let v = p.a().valuations();
        let two_rho_pairing: i64 = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| v[i] - v[j]).sum();
        let exp = |x: i64| BigRational::from_integer(BigInt::from(x));
        if id.holds() && id.lhs.exponent == exp(-vdet) && id.rhs.exponent == exp(two_rho_pairing) {
            ok += 1;
        }
    }
    let mut violations = 0;
    let mut contrapositive_ok = true;
    let mut samples = Vec::new();
    for k in 0..300 {
        let n = 2 + k % 2;
        let ctx = PadicContext::new([2u64, 3][k % 2]).unwrap();
        let rd = RootDatum::gl(n).unwrap();
        let p = random_levi_pair(ctx, &rd, TorusDraw::Any, k % 3 != 0, &mut rng);
        if !in_a_minus(p.a(), &rd) {
            violations += 1;
            contrapositive_ok &= !p.in_am_tilde().unwrap();
        }
        samples.push(p);
    }
    let report = check_ma_properties(&samples).unwrap();
    let pass = ok == 500 && violations >= 50 && contrapositive_ok && report.passed();
    outcome(
        pass,
        format!(
            "{ok}/500 determinant identities; {violations} samples outside A^-, none in (AM)~: {contrapositive_ok}; MA properties: {}",
            report.passed()
        ),
    )
}

fn lefschetz_suite(graphs: &[(&str, GeodesicGraph)]) -> Outcome {
    let mut failures = Vec::new();
    for (name, g) in graphs {
        let prims = primitive_geodesics(g, 12);
        let report = verify_with_classes(g, &prims, 12, &EdgeCharacter::trivial(g));
        let three_routes = report.rows.iter().all(|r| {
            r.pass && r.spectral_from_adjacency.is_some() && matches!(r.geometric, Value::Exact(_))
        });
        if !three_routes {
            failures.push(format!("{name}: {:?}", report.first_failure().map(|r| r.m)));
        }
        // brute force on the short lengths
        for m in 1..=6 {
            if report.rows[m - 1].transfer_trace != Value::Exact(BigInt::from(oracle_closed_walks(g, m))) {
                failures.push(format!("{name}: brute force disagrees at m = {m}"));
            }
        }
    }
    let k4 = &graphs[0].1;
    let anchors = (oracle_closed_walks(k4, 3), oracle_closed_walks(k4, 4));
    let report = verify_with_classes(k4, &primitive_geodesics(k4, 4), 4, &EdgeCharacter::trivial(k4));
    let want = |m: usize| report.rows[m - 1].geometric == Value::Exact(BigInt::from(24));
    let anchors_ok = anchors == (24, 24) && want(3) && want(4);
    outcome(
        failures.is_empty() && anchors_ok,
        format!("{} graphs, m <= 12, three routes equal; K4 anchors {}/{}; {failures:?}", graphs.len(), anchors.0, anchors.1),
    )
}

fn twisted_suite(graphs: &[(&str, GeodesicGraph)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut oracle_ok = true;
    for (name, g) in graphs {
        let prims = primitive_geodesics(g, 8);
        for k in 0..20 {
            let omega = EdgeCharacter::random(g, &mut rng);
            let report = verify_with_classes(g, &prims, 8, &omega);
            for r in &report.rows {
                worst = worst.max((r.geometric.to_complex() - r.transfer_trace.to_complex()).norm());
            }
            if *name == "k4" && k < 3 {
                for m in 1..=6 {
                    let brute = oracle_twisted_walks(g, &omega, m);
                    oracle_ok &= (brute - report.rows[m - 1].geometric.to_complex()).norm() < TWIST_TOLERANCE;
                }
            }
            count += 1;
        }
        // trivial character reproduces the untwisted values exactly
        let trivial = geometric_side_from_classes(&prims, 8, &EdgeCharacter::trivial(g), Complex64::one());
        let counts = g.closed_geodesic_counts(8);
        oracle_ok &= trivial.terms().iter().zip(&counts).all(|(t, c)| t == &Value::Exact(c.clone()));
    }
    outcome(
        worst < TWIST_TOLERANCE && oracle_ok,
        format!("{count} random characters, m <= 8, max deviation {worst:.2e}; brute-force and trivial checks: {oracle_ok}"),
    )
}

fn hecke_suite(graphs: &[(&str, GeodesicGraph)]) -> Outcome {
    let mut bad = Vec::new();
    for (name, g) in graphs {
        let report = check_hecke(g, 12);
        if !report.passed() {
            bad.push(name.to_string());
        }
        // A_m = P_m(A) by direct matrix evaluation
        let a = g.adjacency_matrix();
        for m in [3usize, 7] {
            let mut at_a = IntMatrix::zeros(a.rows(), a.cols());
            for (k, c) in hecke_polynomial(g.q(), m).coeffs().iter().enumerate() {
                at_a = &at_a + &a.pow(k as u32).scale(c);
            }
            if at_a != hecke_operator(g, m) {
                bad.push(format!("{name}: P_{m}(A)"));
            }
        }
    }
    outcome(bad.is_empty(), format!("recurrence and resultant mapping for m <= 12 on {} graphs; failures {bad:?}", graphs.len()))
}

fn covolume_suite(graphs: &[(&str, GeodesicGraph)]) -> Outcome {
    let circle = BettiVector::from(vec![1u64, 1]);
    let mut classes = 0usize;
    let mut ok = true;
    for (_, g) in graphs {
        for c in primitive_geodesics(g, 12) {
            let l = BigRational::from_integer(BigInt::from(c.primitive_length()));
            ok &= covolume(&l, 1, 1, &circle) == l;
            classes += 1;
        }
    }
    outcome(ok, format!("{classes} primitive classes, covolume(l, 1, 1, (1,1)) = l"))
}

fn main() -> ExitCode {
    let graphs = graphs();
    type Criterion<'a> = (&'a str, Duration, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        ("chichi identity", Duration::from_secs(1), Box::new(chichi_suite)),
        ("newton polygon oracle", Duration::from_secs(5), Box::new(newton_oracle)),
        ("determinant identity", Duration::from_secs(10), Box::new(det_identity_suite)),
        ("rank-one lefschetz identity", Duration::from_secs(10), Box::new(|| lefschetz_suite(&graphs))),
        ("twisted identity", Duration::from_secs(10), Box::new(|| twisted_suite(&graphs))),
        ("hecke recurrence and spectral mapping", Duration::from_secs(5), Box::new(|| hecke_suite(&graphs))),
        ("covolume composition", Duration::from_secs(10), Box::new(|| covolume_suite(&graphs))),
    ];
    let mut all = true;
    for (name, budget, run) in &criteria {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= *budget;
        let pass = o.pass && in_time;
        all &= pass;
        println!(
            "{} {name}: {} [{:.2}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
