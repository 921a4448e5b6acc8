//! Built-in verification suites over small enumerable rings, runnable from
//! the CLI. The checks are enumeration oracles: spans, annihilators and
//! Euclidean values are recomputed by brute force, independent of the
//! algorithms they exercise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeSet;

use crate::echelon::{self, ModMatrix};
use crate::ideal::Ideal;
use crate::quotient::{QuotElement, QuotientRing};
use crate::residue::ResidueRingZ;
use crate::ring::{NumberRing, RingElement};
use crate::rng::from_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, outcome: Result<String, String>) -> CheckResult {
    match outcome {
        Ok(detail) => CheckResult { name: name.into(), passed: true, detail },
        Err(detail) => CheckResult { name: name.into(), passed: false, detail },
    }
}

pub fn run(suite: Suite) -> Vec<CheckResult> {
    let mut out = vec![
        check("residue/eudiv-exhaustive-z30", residue_eudiv_z30()),
        check("residue/xgcd-exhaustive-z30", residue_xgcd_z30()),
        check("residue/ann-enumeration-z30", residue_ann_z30()),
        check("quotient/euclidean-zsqrt10-mod-2", quotient_euclidean_sqrt10()),
        check("quotient/xgcd-z30", quotient_xgcd_z30()),
        check(
            "echelon/z6-sweep",
            echelon_z6_sweep(match suite {
                Suite::Quick => 6,   // every 6th matrix
                Suite::Full => 1,    // all 1296
            }),
        ),
        check("pipeline/z-hnf-agreement", pipeline_z_agreement()),
    ];
    if suite == Suite::Full {
        out.push(check("statistics/gen-trials-p2", statistics_gen_trials()));
        out.push(check("statistics/eudiv-trials-bound", statistics_eudiv_bound()));
    }
    out
}

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

fn residue_eudiv_z30() -> Result<String, String> {
    let r = ResidueRingZ::new(bi(30)).map_err(|e| e.to_string())?;
    let mut pairs = 0;
    for a in 0..30i64 {
        for b in 1..30i64 {
            let (q, rem) = r.eudiv(&bi(a), &bi(b)).map_err(|e| e.to_string())?;
            if r.add(&r.mul(&q, &bi(b)), &rem) != r.project(&bi(a)) {
                return Err(format!("a = qb + r fails at a={a}, b={b}"));
            }
            if !rem.is_zero() && r.phi(&rem) >= r.phi(&bi(b)) {
                return Err(format!("phi(r) >= phi(b) at a={a}, b={b}"));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn residue_xgcd_z30() -> Result<String, String> {
    let r = ResidueRingZ::new(bi(30)).map_err(|e| e.to_string())?;
    for a in 0..30i64 {
        for b in 0..30i64 {
            let t = r.xgcd(&bi(a), &bi(b));
            let ok = r.add(&r.mul(&t.s, &bi(a)), &r.mul(&t.t, &bi(b))) == t.g
                && r.add(&r.mul(&t.u, &bi(a)), &r.mul(&t.v, &bi(b))).is_zero()
                && r.sub(&r.mul(&t.s, &t.v), &r.mul(&t.u, &t.t)) == r.one()
                && r.phi(&t.g) == bi(a).gcd(&bi(b)).gcd(&bi(30));
            if !ok {
                return Err(format!("xgcd identities fail at a={a}, b={b}"));
            }
        }
    }
    Ok("900 pairs".into())
}

fn residue_ann_z30() -> Result<String, String> {
    let r = ResidueRingZ::new(bi(30)).map_err(|e| e.to_string())?;
    for a in 0..30i64 {
        let c = r.ann(&bi(a));
        let expect: BTreeSet<i64> = (0..30).filter(|x| (x * a) % 30 == 0).collect();
        let got: BTreeSet<i64> = (0..30)
            .map(|x| i64::try_from(&r.mul(&bi(x), &c)).unwrap())
            .collect();
        if expect != got {
            return Err(format!("annihilator mismatch at a={a}"));
        }
    }
    Ok("30 elements".into())
}

fn four_element_ring() -> (QuotientRing, Vec<QuotElement>) {
    let ring = NumberRing::quadratic(10).expect("squarefree");
    let m = Ideal::from_integer(&ring, &bi(2)).expect("nonzero");
    let q = QuotientRing::new(&ring, &m).expect("valid modulus");
    let elems: Vec<QuotElement> = {
        let mut v = Vec::new();
        for a in 0..2i64 {
            for b in 0..2i64 {
                v.push(q.project(&RingElement::from_i64(&[a, b])));
            }
        }
        v.sort_by_key(|e| format!("{:?}", e.coords()));
        v.dedup();
        v
    };
    (q, elems)
}

fn quotient_euclidean_sqrt10() -> Result<String, String> {
    let (q, elems) = four_element_ring();
    let mut rng = from_seed(1001);
    for a in &elems {
        for b in &elems {
            if b.is_zero() {
                continue;
            }
            let (quo, rem) = q.eudiv(a, b, &mut rng).map_err(|e| e.to_string())?;
            if q.add(&q.mul(&quo, b), &rem) != *a {
                return Err(format!("a = qb + r fails at {a:?}, {b:?}"));
            }
            if !rem.is_zero() && q.phi(&rem) >= q.phi(b) {
                return Err(format!("phi(r) >= phi(b) at {a:?}, {b:?}"));
            }
        }
    }
    Ok(format!("{} pairs", elems.len() * (elems.len() - 1)))
}

fn quotient_xgcd_z30() -> Result<String, String> {
    let ring = NumberRing::integers();
    let m = Ideal::from_integer(&ring, &bi(30)).map_err(|e| e.to_string())?;
    let q = QuotientRing::new(&ring, &m).map_err(|e| e.to_string())?;
    let mut rng = from_seed(1002);
    for a in 0..30i64 {
        for b in 0..30i64 {
            let av = q.from_integer(&bi(a));
            let bv = q.from_integer(&bi(b));
            let t = q.xgcd(&av, &bv, &mut rng).map_err(|e| e.to_string())?;
            let ok = q.add(&q.mul(&t.s, &av), &q.mul(&t.t, &bv)) == t.g
                && q.add(&q.mul(&t.u, &av), &q.mul(&t.v, &bv)).is_zero()
                && q.sub(&q.mul(&t.s, &t.v), &q.mul(&t.u, &t.t)) == q.one()
                && q.element_ideal(&t.g).basis() == q.pair_ideal(&av, &bv).basis();
            if !ok {
                return Err(format!("xgcd fails at a={a}, b={b} over O/(30)"));
            }
        }
    }
    Ok("900 pairs".into())
}

/// Row span of a matrix over Z/6Z by enumeration.
fn z6_span(m: &ModMatrix<BigInt>) -> BTreeSet<Vec<i64>> {
    let rows = m.rows();
    let mut out = BTreeSet::new();
    let mut coeffs = vec![0i64; rows];
    loop {
        let mut v = vec![0i64; m.cols()];
        for (i, &c) in coeffs.iter().enumerate() {
            for j in 0..m.cols() {
                let e: i64 = i64::try_from(m.at(i, j)).unwrap();
                v[j] = (v[j] + c * e).rem_euclid(6);
            }
        }
        out.insert(v);
        let mut i = 0;
        loop {
            if i == rows {
                return out;
            }
            coeffs[i] += 1;
            if coeffs[i] < 6 {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

fn z6_satisfies_s2(h: &ModMatrix<BigInt>, module: &BTreeSet<Vec<i64>>) -> bool {
    let m = h.cols();
    for i in 1..=m {
        let head = ModMatrix::from_rows((0..i).map(|r| h.row(r).to_vec()).collect());
        let generated = z6_span(&head);
        let expected: BTreeSet<Vec<i64>> = module
            .iter()
            .filter(|v| v[i..].iter().all(|&x| x == 0))
            .cloned()
            .collect();
        if generated != expected {
            return false;
        }
    }
    true
}

fn echelon_z6_sweep(stride: usize) -> Result<String, String> {
    let ring = ResidueRingZ::new(bi(6)).map_err(|e| e.to_string())?;
    let r2 = ResidueRingZ::new(bi(2)).map_err(|e| e.to_string())?;
    let r3 = ResidueRingZ::new(bi(3)).map_err(|e| e.to_string())?;
    let mut rng = from_seed(1003);
    let mut count = 0usize;
    for idx in (0..1296usize).step_by(stride) {
        let (a, b, c, d) = (
            (idx / 216) as i64,
            (idx / 36 % 6) as i64,
            (idx / 6 % 6) as i64,
            (idx % 6) as i64,
        );
        let m = ModMatrix::from_rows(vec![vec![bi(a), bi(b)], vec![bi(c), bi(d)]]);
        let module = z6_span(&m);
        let h = echelon::strong_echelon(&ring, &m, &mut rng).map_err(|e| e.to_string())?;
        if !echelon::satisfies_shape(&ring, &h) {
            return Err(format!("(S1) fails at [[{a},{b}],[{c},{d}]]"));
        }
        if z6_span(&h) != module {
            return Err(format!("span changes at [[{a},{b}],[{c},{d}]]"));
        }
        if !z6_satisfies_s2(&h, &module) {
            return Err(format!("(S2) fails at [[{a},{b}],[{c},{d}]]"));
        }
        // Split through mod 2 and mod 3, recombine (1 = 1*3 + 2*2).
        let h3 = echelon::strong_echelon(&r3, &m.map(|x| r3.project(x)), &mut rng)
            .map_err(|e| e.to_string())?;
        let h2 = echelon::strong_echelon(&r2, &m.map(|x| r2.project(x)), &mut rng)
            .map_err(|e| e.to_string())?;
        let a_form = echelon::diagonal_adjust(&ring, &h3.map(|x| ring.project(x)), &bi(3), &bi(2));
        let b_form = echelon::diagonal_adjust(&ring, &h2.map(|x| ring.project(x)), &bi(2), &bi(3));
        let combined = echelon::crt_combine(&ring, &a_form, &b_form, &bi(3), &bi(4));
        if z6_span(&combined) != module {
            return Err(format!("split/recombine span differs at [[{a},{b}],[{c},{d}]]"));
        }
        count += 1;
    }
    Ok(format!("{count} matrices"))
}

fn pipeline_z_agreement() -> Result<String, String> {
    use crate::pseudo::{pseudo_hnf, PseudoHnfOptions, PseudoMatrix};
    use crate::ring::FieldElement;
    use rand::Rng;
    let ring = NumberRing::integers();
    let mut rng = from_seed(1004);
    for trial in 0..10 {
        let n = 3 + trial % 3;
        let rows: Vec<Vec<BigInt>> = (0..n)
            .map(|_| (0..n).map(|_| bi(rng.gen_range(-20..20))).collect())
            .collect();
        let mat = crate::intmat::IntMat::from_rows(rows.clone());
        let classical = crate::intmat::hnf(&mat);
        if classical.rows() < n {
            continue;
        }
        let p = PseudoMatrix::from_matrix(
            &ring,
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|x| FieldElement::from_elem(RingElement::new(vec![x.clone()])))
                        .collect()
                })
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        let out = pseudo_hnf(&ring, &p, &PseudoHnfOptions::default(), &mut rng)
            .map_err(|e| e.to_string())?;
        for i in 0..n {
            let g = out.hnf.ideals[i].norm();
            for j in 0..n {
                let e = &out.hnf.matrix[i][j];
                let v = g * &e.num().coords()[0] / e.den();
                if v != classical[(i, j)] {
                    return Err(format!("entry ({i},{j}) differs from the classical form"));
                }
            }
        }
    }
    Ok("10 matrices".into())
}

fn statistics_gen_trials() -> Result<String, String> {
    // Generator search over O/p2 in Z[sqrt10]: success probability exactly
    // p_m = 1/2 per round, so the mean of the geometric round count must lie
    // in [1.6, 2.4] over >= 1000 draws.
    let ring = NumberRing::quadratic(10).expect("squarefree");
    let p2 = Ideal::from_generators(
        &ring,
        &[RingElement::from_i64(&[2, 0]), RingElement::from_i64(&[0, 1])],
    )
    .expect("full rank");
    let q = QuotientRing::new(&ring, &p2).expect("valid modulus");
    let mut rng = from_seed(1005);
    let mut total = 0u64;
    let trials = 1500u64;
    for _ in 0..trials {
        let (_, rounds) = q.gen_with_rounds(&Ideal::one(&ring), &mut rng).map_err(|e| e.to_string())?;
        total += rounds;
    }
    let mean = total as f64 / trials as f64;
    if (1.6..=2.4).contains(&mean) {
        Ok(format!("mean {mean:.3} over {trials} draws"))
    } else {
        Err(format!("mean {mean:.3} outside [1.6, 2.4]"))
    }
}

fn statistics_eudiv_bound() -> Result<String, String> {
    // Euclidean division over O/(2) in Z[sqrt10]: each sampling round
    // succeeds with probability at least p_m = 1/2, so the nontrivial mean
    // must not exceed 1/p_m (plus noise).
    let ring = NumberRing::quadratic(10).expect("squarefree");
    let m = Ideal::from_integer(&ring, &bi(2)).expect("nonzero");
    let q = QuotientRing::new(&ring, &m).expect("valid modulus");
    let mut rng = from_seed(1006);
    let mut total = 0u64;
    let mut nontrivial = 0u64;
    while nontrivial < 1000 {
        let a = q.random_element(&mut rng);
        let b = q.random_element(&mut rng);
        if b.is_zero() {
            continue;
        }
        let (_, _, rounds) = q.eudiv_with_rounds(&a, &b, &mut rng).map_err(|e| e.to_string())?;
        if rounds > 0 {
            total += rounds;
            nontrivial += 1;
        }
    }
    let mean = total as f64 / nontrivial as f64;
    if mean >= 1.0 && mean <= 2.4 {
        Ok(format!("nontrivial mean {mean:.3} <= 1/p_m + tolerance"))
    } else {
        Err(format!("nontrivial mean {mean:.3} outside [1.0, 2.4]"))
    }
}
