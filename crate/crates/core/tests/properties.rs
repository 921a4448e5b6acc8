//! Property tests for the algebraic invariants that hold on every input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use quotring::intmat::{self, IntMat};
use quotring::residue::{int_xgcd, ResidueRingZ};
use quotring::ring::{NumberRing, RingElement};

fn bi(x: i64) -> BigInt {
    BigInt::from(x)
}

proptest! {
    #[test]
    fn int_xgcd_certificate(a in -10_000i64..10_000, b in -10_000i64..10_000) {
        let t = int_xgcd(&bi(a), &bi(b));
        prop_assert_eq!(&t.s * a + &t.t * b, t.g.clone());
        prop_assert_eq!(&t.u * a + &t.v * b, BigInt::zero());
        prop_assert_eq!(&t.s * &t.v - &t.u * &t.t, BigInt::one());
        prop_assert!(t.g >= BigInt::zero());
        prop_assert_eq!(t.g, bi(a).gcd(&bi(b)));
    }

    #[test]
    fn residue_ops_respect_contracts(n in 2i64..5_000, a in 0i64..5_000, b in 1i64..5_000) {
        let r = ResidueRingZ::new(bi(n)).unwrap();
        let a = r.project(&bi(a));
        let b = r.project(&bi(b));
        if !b.is_zero() {
            let (q, rem) = r.eudiv(&a, &b).unwrap();
            prop_assert_eq!(r.add(&r.mul(&q, &b), &rem), a.clone());
            prop_assert!(rem.is_zero() || r.phi(&rem) < r.phi(&b));
        }
        let t = r.xgcd(&a, &b);
        prop_assert_eq!(r.add(&r.mul(&t.s, &a), &r.mul(&t.t, &b)), t.g.clone());
        prop_assert!(r.add(&r.mul(&t.u, &a), &r.mul(&t.v, &b)).is_zero());
        prop_assert_eq!(r.sub(&r.mul(&t.s, &t.v), &r.mul(&t.u, &t.t)), r.one());
        let (u, g) = r.unit_normalize(&a);
        prop_assert!(r.is_unit(&u));
        prop_assert_eq!(r.mul(&u, &a), g);
    }

    #[test]
    fn hnf_is_a_projection(entries in proptest::collection::vec(-50i64..50, 12)) {
        let rows: Vec<Vec<BigInt>> = entries.chunks(3).map(|c| c.iter().map(|&x| bi(x)).collect()).collect();
        let m = IntMat::from_rows(rows);
        let h = intmat::hnf(&m);
        prop_assert_eq!(intmat::hnf(&h), h.clone());
        // Row spans agree: mutual membership.
        for i in 0..m.rows() {
            prop_assert!(intmat::solve(&h, m.row(i)).is_some());
        }
        for i in 0..h.rows() {
            prop_assert!(intmat::solve(&m, h.row(i)).is_some());
        }
    }

    #[test]
    fn snf_diagonalizes_exactly(entries in proptest::collection::vec(-9i64..9, 9)) {
        let rows: Vec<Vec<BigInt>> = entries.chunks(3).map(|c| c.iter().map(|&x| bi(x)).collect()).collect();
        let m = IntMat::from_rows(rows);
        match intmat::snf(&m) {
            Ok(r) => {
                prop_assert_eq!(r.u.mul(&m).mul(&r.v), r.d.clone());
                prop_assert_eq!(intmat::det(&r.u).abs(), BigInt::one());
                prop_assert_eq!(intmat::det(&r.v).abs(), BigInt::one());
                for i in 0..2 {
                    prop_assert!((&r.d[(i + 1, i + 1)] % &r.d[(i, i)]).is_zero());
                }
            }
            Err(_) => prop_assert!(intmat::det(&m).is_zero()),
        }
    }

    #[test]
    fn solve_mod_solutions_substitute_exactly(
        entries in proptest::collection::vec(-30i64..30, 6),
        rhs in proptest::collection::vec(-30i64..30, 2),
        n in 2i64..400,
    ) {
        let rows: Vec<Vec<BigInt>> = entries.chunks(2).map(|c| c.iter().map(|&x| bi(x)).collect()).collect();
        let a = IntMat::from_rows(rows);
        let b: Vec<BigInt> = rhs.iter().map(|&x| bi(x)).collect();
        let n = bi(n);
        if let Some((x, kernel)) = intmat::solve_mod(&a, &b, &n) {
            let lhs = IntMat::vec_mul(&x, &a);
            for (l, r) in lhs.iter().zip(&b) {
                prop_assert!(((l - r) .mod_floor(&n)).is_zero());
            }
            for i in 0..kernel.rows() {
                let z = IntMat::vec_mul(kernel.row(i), &a);
                prop_assert!(z.iter().all(|v| v.mod_floor(&n).is_zero()));
            }
        }
    }

    #[test]
    fn norm_is_multiplicative(c in proptest::collection::vec(-40i64..40, 4)) {
        let ring = NumberRing::quadratic(10).unwrap();
        let x = RingElement::from_i64(&c[..2]);
        let y = RingElement::from_i64(&c[2..]);
        prop_assert_eq!(ring.norm(&ring.mul(&x, &y)), ring.norm(&x) * ring.norm(&y));
    }
}
