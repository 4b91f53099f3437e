//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the libtest
//! harness so the lines always show up in `cargo test` output.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use tropcount::counting::{count_with, n_trop_p1p1, nonzero_paths, p1p1_instance, path_length, CountOptions};
use tropcount::geometry::{validate_beta, Beta, EdgeId, LatticePoint, LatticePolygon, Partition, RectSide, TangencyProfile};
use tropcount::io::{parse_boundary, parse_diagram, parse_path, parse_polygon, read_file};
use tropcount::multiplicity::{Evaluator, Multiplicity, TurnStrategy};
use tropcount::paths::{enumerate_paths, LatticePath, Side};
use tropcount::polyfit::{chamber_of, verify_chambers, ChamberSummary, Method, Polynomial, ProfileTemplate};
use tropcount::subfloor::{mu_multiplicity, n_floor, weighted_diagrams, FloorOptions};

const LIMIT_GOLDEN_TRIPLE: Duration = Duration::from_secs(10);
const LIMIT_PENTAGON: Duration = Duration::from_secs(1);
const LIMIT_SUBFLOOR: Duration = Duration::from_secs(1);
const LIMIT_CROSS_METHOD: Duration = Duration::from_secs(120);
const LIMIT_CLOSED_FORMS: Duration = Duration::from_secs(300);

/// Profiles with `μ₂` transverse, `|μ| ≤ 4`, `|ν| ≤ 4`, written as
/// `μ₁ ν₁ ν₂`.
const CORPUS: &[&str] = &[
    "1 2,1 3",
    "1 1,1 1,1",
    "2 2,1 3",
    "2 2 1,1",
    "2 2,1 2,1",
    "2 1,1,1,1 2,1,1",
    "1,1 2,1,1 2,1,1",
    "1,1 2 1,1",
    "3 1,1,1 1,1,1",
    "3 2,1 3",
    "3 3,1 2,2",
    "3 2,1,1 2,1,1",
    "2,1 2,1 2,1",
    "2,1 4 2,2",
    "2,1 3,1 2,1,1",
    "1,1,1 2,1 2,1",
    "1,1,1 4 3,1",
    "1,1,1 2,2 2,1,1",
    "4 2,1 2,1",
    "4 4 2,2",
    "4 1,1,1 3",
    "3,1 1,1 1,1",
    "3,1 3 2,1",
    "2,2 2,1 2,1",
    "2,2 3 3",
];

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel)
}

fn text(rel: &str) -> String {
    read_file(fixture(rel)).unwrap_or_else(|e| panic!("{e}"))
}

fn big(n: u64) -> Multiplicity {
    Multiplicity::from(n)
}

fn part(s: &str) -> Partition {
    s.parse().unwrap()
}

fn corpus_profile(line: &str) -> TangencyProfile {
    let f: Vec<&str> = line.split_whitespace().collect();
    let mu1 = part(f[0]);
    let ones = Partition::ones(mu1.size() as usize);
    TangencyProfile::new(mu1, ones, part(f[1]), part(f[2])).unwrap()
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, found: T, expected: T) -> Result<(), String> {
    if found == expected {
        Ok(())
    } else {
        Err(format!("{what}: expected {expected:?}, found {found:?}"))
    }
}

fn within(what: &str, start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    if t <= limit {
        Ok(())
    } else {
        Err(format!("{what} took {:.2}s, limit {:.0}s", t.as_secs_f64(), limit.as_secs_f64()))
    }
}

fn golden_triple() -> Result<String, String> {
    let poly = parse_polygon(&text("rectangle_3x5/polygon.json")).map_err(|e| e.to_string())?;
    let b = parse_boundary(&text("rectangle_3x5/beta.json"), &poly).map_err(|e| e.to_string())?;
    let gamma = parse_path(&text("rectangle_3x5/path.json"), Some(&poly)).map_err(|e| e.to_string())?;

    let t = Instant::now();
    expect("mult(γ)", Evaluator::new(&poly, &b).mult(&gamma), big(1440))?;
    within("multiplicity", t, LIMIT_GOLDEN_TRIPLE)?;

    let t = Instant::now();
    let total = count_with(&poly, &b, 0, &CountOptions::default()).map_err(|e| e.to_string())?;
    expect("count", total.clone(), big(19170))?;
    within("count", t, LIMIT_GOLDEN_TRIPLE)?;

    let t = Instant::now();
    let map = nonzero_paths(&poly, &b, 0).map_err(|e| e.to_string())?;
    expect("nonzero paths", map.len(), 16)?;
    expect("sum over nonzero paths", map.values().sum::<Multiplicity>(), total)?;
    expect("γ among nonzero paths", map.get(&gamma), Some(&big(1440)))?;
    within("nonzero paths", t, LIMIT_GOLDEN_TRIPLE)?;
    Ok("1440 / 19170 / 16 paths".into())
}

fn pentagon() -> Result<String, String> {
    let t = Instant::now();
    let poly = parse_polygon(&text("pentagon/polygon.json")).map_err(|e| e.to_string())?;
    let b = parse_boundary(&text("pentagon/beta.json"), &poly).map_err(|e| e.to_string())?;
    let g = parse_path(&text("pentagon/delta_plus.json"), Some(&poly)).map_err(|e| e.to_string())?;
    let mut eval = Evaluator::new(&poly, &b);
    let first = eval.mult_side(&g, Side::Negative, &TurnStrategy::First).map_err(|e| e.to_string())?;
    let any = eval.mult_side(&g, Side::Negative, &TurnStrategy::AnyHeuristic).map_err(|e| e.to_string())?;
    expect("First", first, big(100))?;
    expect("AnyHeuristic", any, big(100))?;
    let n = g.len() - 1;
    let mut count = 0;
    for sigma in (1..=n).permutations(n) {
        let v = eval.mult_sigma(&g, &sigma).map_err(|e| e.to_string())?;
        expect(&format!("σ = {sigma:?}"), v, big(100))?;
        count += 1;
    }
    expect("mult(δ₊)", eval.mult(&g), big(100))?;
    within("pentagon", t, LIMIT_PENTAGON)?;
    Ok(format!("mult(δ₊) = 100 under First, AnyHeuristic and all {count} σ"))
}

fn subfloor_goldens() -> Result<String, String> {
    let t = Instant::now();
    let diagram = |name: &str| parse_diagram(&text(&format!("subfloor/{name}.json"))).map_err(|e| e.to_string());
    let mu = |name: &str, mu1: &str, expected: u64| -> Result<(), String> {
        let v = mu_multiplicity(&diagram(name)?, &part(mu1)).map_err(|e| e.to_string())?;
        expect(&format!("mult({name})"), v, big(expected))
    };
    mu("f1", "2", 2)?;
    mu("f3", "4", 400)?;
    mu("first_180", "2", 36)?;
    let floor = |s: &str| n_floor(&corpus_profile(s)).map_err(|e| e.to_string());
    expect("N^floor((2),(1,1),(1),(1))", floor("2 1 1")?, big(2))?;
    expect("N^floor((2),(1,1),(2,1),(3))", floor("2 2,1 3")?, big(180))?;
    let f1_profile = corpus_profile("2 1 1");
    let nonzero = weighted_diagrams(&f1_profile, &FloorOptions::default())
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|(_, m)| *m != big(0))
        .collect::<Vec<_>>();
    expect("nonzero diagrams for ((2),(1,1),(1),(1))", nonzero.len(), 1)?;
    expect("that diagram is F₁", &nonzero[0].0, &diagram("f1")?)?;
    within("subfloor goldens", t, LIMIT_SUBFLOOR)?;
    Ok("F₁ = 2, F₃ = 400, first 180-diagram = 36, N^floor = 2 and 180".into())
}

fn cross_method() -> Result<String, String> {
    let t = Instant::now();
    for line in CORPUS {
        let p = corpus_profile(line);
        let floor = n_floor(&p).map_err(|e| format!("{p}: {e}"))?;
        let trop = n_trop_p1p1(&p, 0).map_err(|e| format!("{p}: {e}"))?;
        expect(&format!("{p}"), floor, trop)?;
    }
    within("cross-method corpus", t, LIMIT_CROSS_METHOD)?;
    Ok(format!("N^floor = N^trop on {} profiles", CORPUS.len()))
}

fn scan(template: &str, degree_bound: Option<u32>) -> Result<(ProfileTemplate, ChamberSummary), String> {
    let t = ProfileTemplate::from_json(&text(&format!("polyscan/{template}.json"))).map_err(|e| e.to_string())?;
    let summary =
        verify_chambers(&t, &t.walls(), &BTreeMap::new(), degree_bound, t.genus, Method::Lattice).map_err(|e| e.to_string())?;
    for c in &summary.chambers {
        match &c.fit {
            Ok(fit) if fit.held_out > 0 => {}
            Ok(_) => return Err(format!("{template}: chamber {:?} has no held-out samples", c.signature)),
            Err(e) => return Err(format!("{template}: chamber {:?}: {e}", c.signature)),
        }
    }
    if summary.global.is_none() {
        return Err(format!("{template}: no single global polynomial"));
    }
    Ok((t, summary))
}

fn check_values(
    name: &str,
    summary: &ChamberSummary,
    points: impl IntoIterator<Item = Vec<i64>>,
    formula: impl Fn(&[i64]) -> i64,
) -> Result<usize, String> {
    let poly = summary.global.as_ref().expect("checked by scan");
    let mut n = 0;
    for pt in points {
        let want = BigRational::from_integer(BigInt::from(formula(&pt)));
        expect(&format!("{name} polynomial at {pt:?}"), poly.eval(&pt), want.clone())?;
        if let Some(s) = summary.table.samples.iter().find(|s| s.point == pt) {
            expect(&format!("{name} count at {pt:?}"), BigRational::from_integer(s.value().clone().into()), want)?;
        }
        n += 1;
    }
    Ok(n)
}

fn closed_forms() -> Result<String, String> {
    let t = Instant::now();
    let mut notes = Vec::new();

    let (_, s) = scan("n2n1n2", None)?;
    let off_wall = (1..=3).cartesian_product(1..=3).filter(|(a, b)| a != b).map(|(a, b)| vec![a, b]);
    check_values("10n²n₁n₂", &s, off_wall, |x| 10 * (x[0] + x[1]).pow(2) * x[0] * x[1])?;
    expect("10n²n₁n₂ chambers", s.chambers.len(), 2)?;
    notes.push("10n²n₁n₂");

    for c in [2i64, 3] {
        let (_, s) = scan(&format!("cx_c{c}"), None)?;
        check_values(&format!("c·x^(c+1), c={c}"), &s, (1..=5).map(|x| vec![x]), |x| c * x[0].pow(c as u32 + 1))?;
    }
    notes.push("c·x^(c+1) for c=2,3");

    for c in [2i64, 3] {
        let (_, s) = scan(&format!("cc_c{c}"), Some(4))?;
        check_values(&format!("(c),(c) product, c={c}"), &s, [vec![1, 2], vec![3, 1], vec![2, 5]], |x| {
            2 * x[0] * x[1] * (x[0] + x[1]) * c.pow(3)
        })?;
        // Lengths up to two on each side with disjoint entries, checked directly.
        for (nu1, nu2) in [("3", "1,2"), ("4", "3,1"), ("1,3", "4"), ("4,1", "3,2"), ("2,1", "3"), ("1,1", "2"), ("2,2", "3,1")] {
            let (n1, n2) = (part(nu1), part(nu2));
            if n1.parts().iter().any(|x| n2.parts().contains(x)) {
                return Err(format!("entries of {nu1} and {nu2} overlap"));
            }
            let p = TangencyProfile::new(part(&c.to_string()), part(&c.to_string()), n1.clone(), n2.clone()).unwrap();
            let got = n_trop_p1p1(&p, 0).map_err(|e| e.to_string())?;
            let want = [&n1, &n2].iter().fold(BigInt::from(1), |acc, nu| {
                let ps = nu.parts();
                let arrangements: i64 = if ps.len() == 2 && ps[0] == ps[1] { 1 } else { (1..=ps.len() as i64).product() };
                acc * arrangements * ps.iter().map(|&x| i64::from(x)).product::<i64>() * c.pow(ps.len() as u32)
            });
            expect(&format!("{p}"), BigInt::from(got), want)?;
        }
    }
    notes.push("(c),(c) product for c=2,3");

    let (_, s) = scan("genus1", None)?;
    let poly = s.global.as_ref().expect("checked by scan");
    expect("genus-1 polynomial", poly.to_ascii(), "1/6*n^6 - 1/6*n^4".to_string())?;
    for (n, want) in [(2, 8u64), (3, 108), (4, 640)] {
        let v = n_trop_p1p1(&corpus_profile(&format!("2 {n} {n}")), 1).map_err(|e| e.to_string())?;
        expect(&format!("genus-1 count at n={n}"), v, big(want))?;
    }
    notes.push("(n⁶−n⁴)/6 → 8, 108, 640");

    notes.push(four_regions()?);

    within("closed forms", t, LIMIT_CLOSED_FORMS)?;
    Ok(notes.join("; "))
}

/// Four chambers with distinct polynomials, exchanged by `n₁ ↔ n₂`, each
/// matching lattice counts at off-wall points.
fn four_regions() -> Result<&'static str, String> {
    let t = ProfileTemplate::from_json(&text("polyscan/four_regions.json")).map_err(|e| e.to_string())?;
    let s = verify_chambers(&t, &t.walls(), &BTreeMap::new(), Some(5), 0, Method::Subfloor).map_err(|e| e.to_string())?;
    expect("four-regions chambers", s.chambers.len(), 4)?;
    expect("four-regions distinct polynomials", s.distinct_polynomials(), 4)?;
    let fit = |sig: [i8; 2]| -> Result<&Polynomial, String> {
        let c = s.chambers.iter().find(|c| c.signature == sig).ok_or(format!("no chamber {sig:?}"))?;
        match &c.fit {
            Ok(f) if f.held_out > 0 => Ok(&f.polynomial),
            Ok(_) => Err(format!("four-regions chamber {sig:?} has no held-out samples")),
            Err(e) => Err(format!("four-regions chamber {sig:?}: {e}")),
        }
    };
    // Variables are (m1, n1, n2); the second wall is m1 − n2.
    for (a, b) in [([-1, -1], [1, 1]), ([-1, 1], [-1, 1]), ([1, -1], [1, -1])] {
        for (m1, n1, n2) in [(4, 3, 6), (5, 7, 2), (3, 5, 8), (6, 2, 9), (4, 9, 1)] {
            expect(&format!("n₁ ↔ n₂ symmetry {a:?}/{b:?}"), fit(a)?.eval(&[m1, n1, n2]), fit(b)?.eval(&[m1, n2, n1]))?;
        }
    }
    // The two smallest off-wall samples of each chamber, recounted by lattice paths.
    let mut per_chamber: BTreeMap<Vec<i8>, Vec<&Vec<i64>>> = BTreeMap::new();
    let off_wall = s.table.samples.iter().map(|x| &x.point).filter(|p| !s.on_wall.contains(p));
    for pt in off_wall.sorted_by_key(|p| (p[1] + p[2], p.to_vec())) {
        let sig = chamber_of(&t, pt, &s.walls).map_err(|e| e.to_string())?;
        per_chamber.entry(sig).or_default().push(pt);
    }
    for (sig, pts) in per_chamber {
        for pt in pts.into_iter().take(2) {
            let profile = t.instantiate(pt).map_err(|e| e.to_string())?;
            let count = n_trop_p1p1(&profile, 0).map_err(|e| e.to_string())?;
            let want = BigRational::from_integer(BigInt::from(count));
            expect(&format!("four-regions lattice count at {pt:?}"), fit([sig[0], sig[1]])?.eval(pt), want)?;
        }
    }
    Ok("four regions")
}

fn rect_beta(poly: &LatticePolygon, sides: [(RectSide, Vec<u32>); 4]) -> Option<tropcount::geometry::BoundaryData> {
    let raw: BTreeMap<EdgeId, Beta> = sides.into_iter().map(|(s, v)| (poly.rectangle_edge(s).unwrap(), Beta::new(v))).collect();
    validate_beta(poly, &raw).ok()
}

fn sigma_invariance() -> Result<usize, String> {
    let mut checked = 0;
    for (w, h) in (1..=3).cartesian_product(1..=4) {
        let poly = LatticePolygon::rectangle(w, h).unwrap();
        let unit = |n: i64| vec![n as u32];
        let single = |n: i64| {
            let mut v = vec![0; n as usize];
            v[n as usize - 1] = 1;
            v
        };
        let choices = [
            [(RectSide::Bottom, unit(w)), (RectSide::Top, unit(w)), (RectSide::Left, unit(h)), (RectSide::Right, unit(h))],
            [(RectSide::Bottom, single(w)), (RectSide::Top, unit(w)), (RectSide::Left, unit(h)), (RectSide::Right, single(h))],
            [(RectSide::Bottom, unit(w)), (RectSide::Top, single(w)), (RectSide::Left, single(h)), (RectSide::Right, unit(h))],
        ];
        for sides in choices {
            let b = rect_beta(&poly, sides).expect("valid β");
            let mut eval = Evaluator::new(&poly, &b);
            for len in 1..=6 {
                for g in enumerate_paths(&poly, len) {
                    let first = eval.mult_side(&g, Side::Negative, &TurnStrategy::First).unwrap();
                    let any = eval.mult_side(&g, Side::Negative, &TurnStrategy::AnyHeuristic).unwrap();
                    expect(&format!("AnyHeuristic on {g}"), &any, &first)?;
                    let n = g.len() - 1;
                    for sigma in (1..=n).permutations(n) {
                        let v = eval.mult_sigma(&g, &sigma).unwrap();
                        expect(&format!("σ = {sigma:?} on {g} in {w}×{h}"), &v, &first)?;
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn trapezoid() -> Result<usize, String> {
    let mut checked = 0;
    for k in 1..=3 {
        for etas in [1u32, 2, 4].into_iter().permutations(k) {
            let a: i64 = etas.iter().map(|&e| i64::from(e)).sum();
            for b in -1..a {
                let pts = [(0, 0), (0, a), (1, a), (1, b)].map(LatticePoint::from);
                let poly = LatticePolygon::new(pts).unwrap();
                let edge = |u: (i64, i64), v: (i64, i64)| poly.edge_between(u.into(), v.into()).unwrap();
                let mut path = vec![LatticePoint::from((0, a))];
                let mut y = a;
                for &e in &etas {
                    y -= i64::from(e);
                    path.push((0, y).into());
                }
                path.push((1, b).into());
                let gamma = LatticePath::in_polygon(path, &poly).map_err(|e| e.to_string())?;
                let right_len = (a - b) as u64;
                for rparts in partitions(right_len) {
                    let raw: BTreeMap<EdgeId, Beta> = [
                        (edge((0, 0), (0, a)), Beta::from_step_lengths(etas.iter().map(|&e| u64::from(e)))),
                        (edge((0, a), (1, a)), Beta::new(vec![1])),
                        (edge((1, a), (1, b)), Beta::from_step_lengths(rparts.iter().copied())),
                        (edge((0, 0), (1, b)), Beta::new(vec![1])),
                    ]
                    .into();
                    let bd = validate_beta(&poly, &raw).map_err(|e| e.to_string())?;
                    let got = Evaluator::new(&poly, &bd).mult_side(&gamma, Side::Positive, &TurnStrategy::First).unwrap();
                    let distinct = rparts.iter().all_unique();
                    let subset = rparts.iter().all(|&r| etas.contains(&(r as u32)));
                    let want = if distinct && subset {
                        etas.iter().filter(|&&e| !rparts.contains(&u64::from(e))).map(|&e| u64::from(e)).product()
                    } else {
                        0
                    };
                    expect(&format!("trapezoid η={etas:?} b={b} β_right={rparts:?}"), got, big(want))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}

fn partitions(n: u64) -> Vec<Vec<u64>> {
    fn rec(n: u64, max: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 0 {
            out.push(acc.clone());
            return;
        }
        for p in (1..=n.min(max)).rev() {
            acc.push(p);
            rec(n - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

fn pruning_and_symmetry() -> Result<usize, String> {
    for line in CORPUS {
        let p = corpus_profile(line);
        let (poly, b) = p1p1_instance(&p).unwrap();
        let plain = count_with(&poly, &b, 0, &CountOptions::default()).map_err(|e| e.to_string())?;
        let pruned = count_with(&poly, &b, 0, &CountOptions { prune: true, ..Default::default() }).map_err(|e| e.to_string())?;
        expect(&format!("pruning on {p}"), &pruned, &plain)?;
        let swapped = TangencyProfile::new(p.mu1.clone(), p.mu2.clone(), p.nu2.clone(), p.nu1.clone()).unwrap();
        expect(&format!("ν reflection of {p}"), n_trop_p1p1(&swapped, 0).map_err(|e| e.to_string())?, plain.clone())?;
        let flipped = TangencyProfile::new(p.mu2.clone(), p.mu1.clone(), p.nu1.clone(), p.nu2.clone()).unwrap();
        expect(&format!("μ reflection of {p}"), n_trop_p1p1(&flipped, 0).map_err(|e| e.to_string())?, plain)?;
        path_length(&b, 0).map_err(|e| e.to_string())?;
    }
    Ok(CORPUS.len())
}

fn properties() -> Result<String, String> {
    let paths = sigma_invariance()?;
    let traps = trapezoid()?;
    let profiles = pruning_and_symmetry()?;
    Ok(format!(
        "σ/strategy invariance on {paths} paths; {traps} trapezoid cases; pruning and reflection on {profiles} profiles"
    ))
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: [(&str, Criterion); 6] = [
        ("golden triple on the 3×5 rectangle", golden_triple),
        ("pentagon δ₊ under every strategy", pentagon),
        ("subfloor goldens", subfloor_goldens),
        ("cross-method agreement", cross_method),
        ("closed forms by polyscan", closed_forms),
        ("property suites", properties),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = run();
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {}: {name} ({secs:.2}s): {detail}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
