//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subspace_core::chow::{
    chow_height, chow_of_hypersurface, expand_skew, psigma_count_report, skew_apply, skew_pairs,
};
use subspace_core::constants::{assemble_constants, b_const, place_constant_power, ConstantInputs};
use subspace_core::filtration::{build_filtration, exponent_sum, filtration_inequality_check, lemma_c_check};
use subspace_core::function_field::{divisor, gauss_order, height_point, height_poly_family, support_of, weil};
use subspace_core::graded_ideal::{check_subgeneral_position, hilbert_function, quotient_monomial_basis, IdealGenerators};
use subspace_core::harness::{load_scenario, run_check};
use subspace_core::hilbert_bounds::{
    chardin_upper, power_sum, power_sum_bounds, ratio_check, sombra_lower, t_lower_bound, t_value, threshold_a_eps,
    HilbertTable,
};
use subspace_core::{HomogeneousPoly, Monomial, Place, Poly, ProjectivePoint, QPoly, RationalFunction};

type Outcome = Result<String, String>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn big_rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn random_qpoly(rng: &mut ChaCha8Rng, max_deg: usize) -> QPoly {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let coeffs: Vec<i64> = (0..=deg).map(|_| rng.gen_range(-9..=9)).collect();
        let p = QPoly::from_i64s(&coeffs);
        if !p.is_zero() {
            return p;
        }
    }
}

fn random_rf(rng: &mut ChaCha8Rng, max_deg: usize) -> RationalFunction {
    RationalFunction::new(random_qpoly(rng, max_deg), random_qpoly(rng, max_deg))
}

fn random_point(rng: &mut ChaCha8Rng, len: usize, max_deg: usize) -> ProjectivePoint {
    let coords = (0..len).map(|_| random_rf(rng, max_deg)).collect();
    ProjectivePoint::new(coords).expect("nonzero coordinates")
}

fn random_form(rng: &mut ChaCha8Rng, num_vars: usize, degree: u32, max_deg: usize) -> HomogeneousPoly {
    let mut poly = Poly::zero(num_vars);
    for mono in subspace_core::multipoly::monomial_basis(num_vars, degree) {
        if rng.gen_bool(0.6) {
            poly.add_term(mono, RationalFunction::from_poly(random_qpoly(rng, max_deg)));
        }
    }
    if poly.is_zero() {
        let mut e = vec![0; num_vars];
        e[0] = degree;
        poly.add_term(Monomial::new(e), RationalFunction::one());
    }
    HomogeneousPoly::new(poly, degree).expect("homogeneous by construction")
}

fn place(s: &str) -> Place {
    Place::parse(s).expect("valid place")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    for i in 0..500 {
        let f = random_rf(&mut rng, 8);
        let div = divisor(&f).map_err(|e| format!("element {i}: {e}"))?;
        let total: i64 = div.iter().map(|(p, ord)| ord * p.degree()).sum();
        ensure(total == 0, || format!("element {i} ({f}): sum = {total}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(2), || format!("took {elapsed:?}"))?;
    Ok(format!("500 elements, {elapsed:.2?}"))
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let fixed = ["t", "t-1", "t+1", "t^2+1", "t^2-2", "inf"];
    let mut checks = 0;
    for i in 0..100 {
        let x = random_point(&mut rng, 3, 3);
        let deg = rng.gen_range(1..=2);
        let q = random_form(&mut rng, 3, deg, 2);
        let alpha = random_rf(&mut rng, 3);
        let beta = random_rf(&mut rng, 3);
        let ax = x.scale(&alpha);
        let bq = q.scale(&beta);
        ensure(height_point(&ax) == height_point(&x), || format!("case {i}: h(ax) != h(x)"))?;
        let hq = height_poly_family(std::slice::from_ref(&q)).map_err(|e| e.to_string())?;
        let hbq = height_poly_family(std::slice::from_ref(&bq)).map_err(|e| e.to_string())?;
        ensure(hq == hbq, || format!("case {i}: h(bQ) != h(Q)"))?;
        let qx = q.eval(x.coords()).map_err(|e| e.to_string())?;
        if qx.is_zero() {
            continue;
        }
        let mut places: Vec<Place> = fixed.iter().map(|s| place(s)).collect();
        places.extend(support_of(x.coords().iter().chain(q.coefficients()).chain([&qx])));
        for p in &places {
            let w = weil(p, &q, &x).map_err(|e| e.to_string())?;
            let w2 = weil(p, &bq, &ax).map_err(|e| e.to_string())?;
            ensure(w == w2, || format!("case {i}: weil not gauge invariant at {p}"))?;
            ensure(!w.is_negative(), || format!("case {i}: negative weil at {p}"))?;
            checks += 1;
        }
    }
    Ok(format!("100 cases, {checks} Weil evaluations"))
}

fn criterion_3() -> Outcome {
    let conic = IdealGenerators::parse(3, &["X0*X2 - X1^2"]).map_err(|e| e.to_string())?;
    for m in 1..=10u64 {
        let h = BigInt::from(hilbert_function(&conic, m as u32));
        ensure(h == BigInt::from(2 * m + 1), || format!("conic H({m}) = {h}"))?;
        ensure(h == sombra_lower(m, 1, 2), || format!("lower bound differs at {m}"))?;
        ensure(h <= chardin_upper(m, 1, 2), || format!("upper bound fails at {m}"))?;
    }
    let mut cases = 0;
    for big_m in 1..=3usize {
        for delta in 1..=3u32 {
            let mut terms: Vec<String> = (0..=big_m).map(|i| format!("X{i}^{delta}")).collect();
            terms.push(format!("t*X0*X{}^{}", big_m, delta - 1));
            let f = terms.join(" + ");
            let ideal = IdealGenerators::parse(big_m + 1, &[f.as_str()]).map_err(|e| e.to_string())?;
            for m in 0..=8i64 {
                let h = BigInt::from(hilbert_function(&ideal, m as u32));
                let mm = big_m as i64;
                let expected = binom(m + mm, mm) - binom(m - i64::from(delta) + mm, mm);
                ensure(h == expected, || format!("P^{big_m}, degree {delta}, m = {m}: {h} != {expected}"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("conic m <= 10 and {cases} hypersurface values"))
}

fn criterion_4() -> Outcome {
    for k in 1..=25u32 {
        for l in 1..=25u64 {
            let exact: BigInt = (1..=l).map(|i| BigInt::from(i).pow(k)).sum();
            ensure(power_sum(k, l) == exact, || format!("S_{k}({l}) mismatch"))?;
            let l1 = BigInt::from(l + 1);
            let upper = BigRational::new(l1.pow(k + 1), BigInt::from(k + 1));
            let lower = &upper - BigRational::new(l1.pow(k), BigInt::from(2));
            let s = big_rat(exact);
            ensure(lower <= s && s <= upper, || format!("bounds fail at k={k}, l={l}"))?;
            let (lo, hi) = power_sum_bounds(k, l);
            ensure(lo == lower && hi == upper, || format!("reported bounds differ at k={k}, l={l}"))?;
        }
    }
    let s = big_rat(power_sum(2, 3));
    ensure(s == rat(14), || "S_2(3) != 14".into())?;
    ensure(
        BigRational::new(40.into(), 3.into()) < s && s < BigRational::new(64.into(), 3.into()),
        || "S_2(3) outside (40/3, 64/3)".into(),
    )?;
    Ok("625 pairs; S_2(3) = 14".into())
}

fn criterion_5() -> Outcome {
    let eps = rat(1);
    let a = threshold_a_eps(1, 2, 1, &eps);
    // The conic ratio is 2m/(m-1); find where it first drops to 3.
    let first = (2..).find(|&m: &i64| BigRational::new((2 * m).into(), (m - 1).into()) <= rat(3)).unwrap();
    ensure(first == 3, || format!("oracle threshold {first}"))?;
    ensure(a >= first as u64, || format!("a_eps = {a} below {first}"))?;
    let table: HilbertTable = (0..=a + 101).map(|k| (k, BigInt::from(if k == 0 { 1 } else { 2 * k + 1 }))).collect();
    for m in a..=a + 100 {
        let r = ratio_check(&table, m, 1, 1, &eps).map_err(|e| e.to_string())?;
        ensure(r.ok, || format!("ratio check fails at m = {m}"))?;
    }
    let mut checked = 0;
    for n in 1..=3u64 {
        for delta in 1..=4u64 {
            for d in 1..=3u64 {
                for m in (d..=200).step_by(d as usize) {
                    let g = |z: i64| {
                        let nn = n as i64 + 1;
                        binom(z + nn, nn) - binom(z - delta as i64 + nn, nn)
                    };
                    let t: BigInt = (1..(m / d) as i64).map(|i| g(i * d as i64)).sum();
                    ensure(t == t_value(m / d - 1, n, delta, d), || format!("T mismatch n={n} D={delta} d={d} m={m}"))?;
                    let lhs = big_rat(BigInt::from(d) * t);
                    let rhs = t_lower_bound(m, n, delta, d);
                    ensure(lhs >= rhs, || format!("lower bound fails n={n} D={delta} d={d} m={m}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("a_eps = {a}; ratio holds on [{a}, {}]; {checked} lower-bound cases", a + 100))
}

fn criterion_6() -> Outcome {
    let f = HomogeneousPoly::parse("X0*X2 - X1^2", 3).map_err(|e| e.to_string())?;
    let form = chow_of_hypersurface(&f).map_err(|e| e.to_string())?;
    ensure(form.block_degrees() == vec![2, 2], || format!("block degrees {:?}", form.block_degrees()))?;
    let exp = expand_skew(&form).map_err(|e| e.to_string())?;
    let pairs = skew_pairs(3).len();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..10 {
        let s: Vec<RationalFunction> = (0..2 * pairs).map(|_| random_rf(&mut rng, 2)).collect();
        let x: Vec<RationalFunction> = (0..3).map(|_| random_rf(&mut rng, 2)).collect();
        let u: Vec<Vec<RationalFunction>> = (0..2).map(|b| skew_apply(&s[b * pairs..(b + 1) * pairs], &x)).collect();
        let direct = form.eval(&u).map_err(|e| e.to_string())?;
        let expanded = exp.evaluate(&s, &x).map_err(|e| e.to_string())?;
        ensure(direct == expanded, || format!("substitution {i} differs"))?;
    }
    for _ in 0..25 {
        let s = random_rf(&mut rng, 3);
        let x = vec![RationalFunction::one(), s.clone(), &s * &s];
        ensure(exp.vanishes_at(&x).map_err(|e| e.to_string())?, || format!("P_sigma nonzero at [1:{s}:s^2]"))?;
    }
    let off = vec![RationalFunction::one(), RationalFunction::zero(), RationalFunction::one()];
    ensure(!exp.vanishes_at(&off).map_err(|e| e.to_string())?, || "all P_sigma vanish at [1:0:1]".into())?;

    // Coefficient valuations, on a conic with nonconstant coefficients too.
    let mut places_checked = 0;
    for text in ["X0*X2 - X1^2", "t*X0*X2 - (t^2+1)*X1^2 + (t-1)*X0^2"] {
        let f = HomogeneousPoly::parse(text, 3).map_err(|e| e.to_string())?;
        let form = chow_of_hypersurface(&f).map_err(|e| e.to_string())?;
        let exp = expand_skew(&form).map_err(|e| e.to_string())?;
        let mut places: Vec<Place> = support_of(form.coefficients()).into_iter().collect();
        places.extend(["t", "inf"].map(place));
        for p in &places {
            let e_f = gauss_order(p, form.coefficients()).unwrap();
            for q in exp.polys() {
                let e_q = gauss_order(p, q.coefficients()).unwrap();
                ensure(e_q >= e_f, || format!("{text}: valuation bound fails at {p}"))?;
            }
            places_checked += 1;
        }
    }
    let count = psigma_count_report(&exp);
    println!(
        "      P_sigma count for the conic: closed form {} vs combinatorial {} (actual nonzero {})",
        count.paper_bound, count.monomial_count, count.actual
    );
    Ok(format!("10 substitutions, 25 conic points, {places_checked} places"))
}

fn criterion_7() -> Outcome {
    let p1 = IdealGenerators::zero(2);
    let q = HomogeneousPoly::parse("X0", 2).map_err(|e| e.to_string())?;
    let basis = build_filtration(&p1, 4, &q, 1).map_err(|e| e.to_string())?;
    let sum = exponent_sum(&basis, &p1);
    ensure(sum.sum == 10, || format!("exponent sum {}", sum.sum))?;
    // H(0) + H(1) + H(2) + H(3) on P^1.
    ensure(sum.sum == 1 + 2 + 3 + 4, || "oracle mismatch".into())?;
    ensure(sum.stated == 9 && sum.difference == 1, || format!("stated S(3) = {}", sum.stated))?;
    let x = ProjectivePoint::parse(&["t", "1"]).map_err(|e| e.to_string())?;
    let ineq = filtration_inequality_check(&place("t"), &x, &basis, &p1).map_err(|e| e.to_string())?;
    ensure(ineq.lhs == Some(10) && ineq.rhs == 9 && ineq.ok, || format!("inequality {ineq:?}"))?;

    let conic = IdealGenerators::parse(3, &["X0*X2 - X1^2"]).map_err(|e| e.to_string())?;
    let mut cases = 0;
    for (gens, nv, h) in [
        (&p1, 2usize, (|k: u64| k + 1) as fn(u64) -> u64),
        (&conic, 3, |k: u64| 2 * k + 1),
    ] {
        for m in 1..=6u32 {
            for qtext in ["X0", "X0 + X1"] {
                let q = HomogeneousPoly::parse(qtext, nv).map_err(|e| e.to_string())?;
                let b = build_filtration(gens, m, &q, 1).map_err(|e| e.to_string())?;
                for (i, &dim) in b.level_dims.iter().enumerate() {
                    let expected = h(u64::from(m) - i as u64);
                    ensure(dim == expected, || format!("m={m}, Q={qtext}, level {i}: {dim} != {expected}"))?;
                }
                cases += 1;
            }
        }
    }
    println!("      sum i_j = 10 exceeds the stated S(3) = 9 by H(0) = 1");
    Ok(format!("lhs 10 >= rhs 9; {cases} filtrations with matching level dimensions"))
}

fn criterion_8() -> Outcome {
    let conic = IdealGenerators::parse(3, &["X0*X2 - X1^2"]).map_err(|e| e.to_string())?;
    let f = HomogeneousPoly::parse("X0*X2 - X1^2", 3).map_err(|e| e.to_string())?;
    let h_fx = chow_height(&chow_of_hypersurface(&f).map_err(|e| e.to_string())?);
    let m = 2u32;
    let m_prime = u64::from(m).max(3).max(2 * 2);
    let b = b_const(m_prime, 1, 2, 2).map_err(|e| e.to_string())?;
    let basis = quotient_monomial_basis(&conic, m);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..10 {
        let a = RationalFunction::from_poly(random_qpoly(&mut rng, 3));
        let c = RationalFunction::from_poly(random_qpoly(&mut rng, 3));
        let x = ProjectivePoint::new(vec![&a * &a, &a * &c, &c * &c]).map_err(|e| e.to_string())?;
        let r = lemma_c_check(&basis, &x, &b, &h_fx).map_err(|e| e.to_string())?;
        let mh = rat(i64::from(m)) * height_point(&x);
        ensure(mh >= r.h_phi, || format!("point {i}: m h(x) < h(Phi(x))"))?;
        let lower = &mh - rat(4) * big_rat(b.clone()) * &h_fx;
        ensure(r.h_phi >= lower, || format!("point {i}: lower bound fails"))?;
        ensure(r.upper_ok && r.lower_ok, || format!("point {i}: report flags {r:?}"))?;
    }
    Ok(format!("10 points, b = b({m_prime}, 1, 2) = {b}, h(F_X) = {h_fx}"))
}

fn criterion_9() -> Outcome {
    let expected_b = BigInt::from(16u128 * 16 + 20u128.pow(10));
    let b = b_const(4, 1, 2, 2).map_err(|e| e.to_string())?;
    ensure(b == expected_b, || format!("b = {b}"))?;
    ensure(b.to_string() == "10240000000256", || "b literal".into())?;
    let power = place_constant_power(1, 2, 2, 2, 1);
    let expected = BigInt::from(36u128.pow(12));
    ensure(power == expected, || format!("power = {power}"))?;
    ensure(power.to_string() == "4738381338321616896", || "power literal".into())?;

    let mut inputs = ConstantInputs {
        n: 1,
        delta: 2,
        ambient_dim: 2,
        big_n: 2,
        q: 4,
        degrees: vec![1; 4],
        s_card: 2,
        s_degree: 2,
        h_q: vec![BigRational::zero(); 4],
        ..ConstantInputs::default()
    };
    let m = inputs.degree_m();
    let table: HilbertTable = (0..=m).map(|k| (k, BigInt::from(if k == 0 { 1 } else { 2 * k + 1 }))).collect();
    let c = assemble_constants(&inputs, &table).map_err(|e| e.to_string())?;
    let zeros = [&c.lemma37_a, &c.b1, &c.b2, &c.b3, &c.c_eps, &c.c_prime_eps];
    ensure(zeros.iter().all(|v| v.is_zero()), || "zero heights give nonzero constants".into())?;
    inputs.c1_prime = rat(5);
    let c = assemble_constants(&inputs, &table).map_err(|e| e.to_string())?;
    let s: u64 = (1..m).map(|k| 2 * k + 1).sum();
    ensure(c.c_prime_eps == BigRational::new(BigInt::from(2 * 5), BigInt::from(s)), || {
        format!("c'_eps = {}", c.c_prime_eps)
    })?;
    Ok(format!("b and 36^12 exact; c'_eps = N c1'/(d S) with m = {m}"))
}

fn scenario_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/conic.json")
}

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let scenario = load_scenario(scenario_path()).map_err(|e| e.to_string())?;
    let report = run_check(&scenario).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    ensure(report.position.in_position, || "N = 2 not certified".into())?;
    let below = check_subgeneral_position(&scenario.ideal(), &scenario.polys(), 1, 12).map_err(|e| e.to_string())?;
    ensure(!below.in_position, || "N = 1 not refuted".into())?;
    ensure(below.witnesses().first() == Some(&&[0usize, 1][..]), || format!("witnesses {:?}", below.witnesses()))?;
    ensure(report.points.len() == 20, || format!("{} points", report.points.len()))?;
    let first = &report.points[0];
    ensure(
        first.height == rat(2) && first.lhs == Some(rat(6)) && first.rhs_main == Some(rat(10)),
        || format!("k = 1 record {first:?}"),
    )?;
    for p in &report.points {
        let r = p.ratio.clone().ok_or_else(|| format!("point {} has no ratio", p.index))?;
        ensure(r <= rat(5), || format!("point {}: lhs/h = {r}", p.index))?;
    }

    let exe = env!("CARGO_BIN_EXE_subspace");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("report{run}.json"));
        let status = Command::new(exe)
            .arg("check")
            .arg(scenario_path())
            .args(["--format", "json", "--report"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.code() == Some(0), || format!("exit code {:?}", status.status.code()))?;
        outputs.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    ensure(outputs[0] == outputs[1], || "JSON reports differ between runs".into())?;
    Ok(format!("run in {elapsed:.2?}; exit 0; {} byte report stable", outputs[0].len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("sum formula", criterion_1),
        ("height and Weil gauge invariance", criterion_2),
        ("Hilbert functions", criterion_3),
        ("power-sum bounds", criterion_4),
        ("ratio threshold", criterion_5),
        ("Chow machinery", criterion_6),
        ("filtration", criterion_7),
        ("height sandwich", criterion_8),
        ("constants", criterion_9),
        ("end to end", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
