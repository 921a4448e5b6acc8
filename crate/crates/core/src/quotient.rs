//! The residue class ring `O/m` as an effective Euclidean ring.
//!
//! Construction diagonalizes the modulus: the Smith normal form of the basis
//! of `m` yields an adapted basis `w'` of `O` with `m = n_1 w'_1 Z + ... +
//! n_d w'_d Z`, identifying `O/m` with `Z/n_1 Z x ... x Z/n_d Z` as an
//! abelian group. Elements are componentwise-reduced coordinate tuples and
//! multiplication uses structure constants transformed once per ring.
//!
//! The Euclidean function is `phi(x) = N((x) + m)` with `phi(0) = N(m)`.
//! Division with remainder, ideal-generator search (B6), annihilators (B5)
//! and minimal quotients are Las Vegas: they sample candidates from a caller
//! supplied PRNG and certify every answer exactly, so outputs are always
//! correct and reproducible for a fixed seed. Exact division (B2), Bezout
//! cofactors for coprime elements and the extended gcd certificate reduce to
//! integer linear algebra modulo `N`.

use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::intmat::{self, IntMat};
use crate::residue::XgcdTuple;
use crate::ring::{NumberRing, RingElement};
use crate::rng::Prng;
use crate::SAMPLING_BUDGET;

#[derive(Clone, Debug)]
pub struct QuotientRing {
    ring: NumberRing,
    modulus: Ideal,
    /// Diagonal invariants n_1 | n_2 | ... | n_d of O/m.
    invariants: Vec<BigInt>,
    /// v' = v * to_adapted maps w-coordinates to adapted coordinates.
    to_adapted: IntMat,
    /// v = v' * from_adapted maps back; rows are the adapted basis in w.
    from_adapted: IntMat,
    /// Structure constants in the adapted basis.
    gamma: Vec<BigInt>,
    /// N = n_1 * ... * n_d = norm(m).
    big_n: BigInt,
}

/// An element of `O/m`: adapted coordinates with `coords[i] in [0, n_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotElement {
    coords: Vec<BigInt>,
}

impl QuotElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }
}

/// Outcome of exact division (B2): the annihilator lattice of the divisor is
/// a byproduct of the linear solve and is returned alongside.
pub struct Division {
    pub quotient: Option<QuotElement>,
    /// Hermite basis (in w-coordinates) of the lift of Ann(divisor).
    pub annihilator: IntMat,
}

impl QuotientRing {
    pub fn new(ring: &NumberRing, m: &Ideal) -> Result<Self> {
        let d = ring.degree();
        let snf = intmat::snf(m.basis())?;
        let invariants: Vec<BigInt> = (0..d).map(|i| snf.d[(i, i)].clone()).collect();
        let from_adapted = intmat::unimodular_inverse(&snf.v);
        let to_adapted = snf.v;
        let big_n = invariants.iter().product();
        // Transform the structure constants into the adapted basis.
        let mut gamma = Vec::with_capacity(d * d * d);
        for i in 0..d {
            let wi = RingElement::new(from_adapted.row_vec(i));
            for j in 0..d {
                let wj = RingElement::new(from_adapted.row_vec(j));
                let prod = ring.mul(&wi, &wj);
                let adapted = IntMat::vec_mul(prod.coords(), &to_adapted);
                gamma.extend(adapted);
            }
        }
        Ok(QuotientRing {
            ring: ring.clone(),
            modulus: m.clone(),
            invariants,
            to_adapted,
            from_adapted,
            gamma,
            big_n,
        })
    }

    pub fn number_ring(&self) -> &NumberRing {
        &self.ring
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn invariants(&self) -> &[BigInt] {
        &self.invariants
    }

    /// N = |O/m|.
    pub fn size(&self) -> &BigInt {
        &self.big_n
    }

    pub fn degree(&self) -> usize {
        self.ring.degree()
    }

    fn reduce(&self, mut coords: Vec<BigInt>) -> QuotElement {
        for (c, n) in coords.iter_mut().zip(&self.invariants) {
            *c = c.mod_floor(n);
        }
        QuotElement { coords }
    }

    pub fn project(&self, x: &RingElement) -> QuotElement {
        self.reduce(IntMat::vec_mul(x.coords(), &self.to_adapted))
    }

    /// Canonical representative: adapted coordinates in `[0, n_i)` mapped
    /// back to the original basis.
    pub fn lift(&self, x: &QuotElement) -> RingElement {
        RingElement::new(IntMat::vec_mul(&x.coords, &self.from_adapted))
    }

    pub fn zero(&self) -> QuotElement {
        QuotElement { coords: vec![BigInt::zero(); self.degree()] }
    }

    pub fn one(&self) -> QuotElement {
        self.project(&self.ring.one())
    }

    pub fn from_integer(&self, n: &BigInt) -> QuotElement {
        self.project(&self.ring.from_integer(n))
    }

    pub fn add(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        self.reduce(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        self.reduce(a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &QuotElement) -> QuotElement {
        self.reduce(a.coords.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        let d = self.degree();
        let mut out = vec![BigInt::zero(); d];
        for i in 0..d {
            if a.coords[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if b.coords[j].is_zero() {
                    continue;
                }
                let c = &a.coords[i] * &b.coords[j];
                for k in 0..d {
                    let g = &self.gamma[(i * d + j) * d + k];
                    if !g.is_zero() {
                        out[k] += &c * g;
                    }
                }
            }
        }
        self.reduce(out)
    }

    pub fn random_element(&self, rng: &mut Prng) -> QuotElement {
        let coords = self
            .invariants
            .iter()
            .map(|n| {
                if n.is_one() {
                    BigInt::zero()
                } else {
                    rng.gen_bigint_range(&BigInt::zero(), n)
                }
            })
            .collect();
        QuotElement { coords }
    }

    /// Lattice of the ideal `(lift x) + m` in w-coordinates.
    fn element_ideal_lattice(&self, x: &QuotElement) -> IntMat {
        let lifted = self.lift(x);
        let rep = self.ring.rep_matrix(&lifted);
        intmat::hnf_modular(&rep.stack(self.modulus.basis()), &self.big_n)
    }

    /// The ideal `(lift x) + m`.
    pub fn element_ideal(&self, x: &QuotElement) -> Ideal {
        Ideal::from_hnf_public(self.element_ideal_lattice(x))
    }

    /// Euclidean function: `phi(x) = N((x) + m)`; `phi(0) = N`.
    pub fn phi(&self, x: &QuotElement) -> BigInt {
        let h = self.element_ideal_lattice(x);
        (0..h.rows()).map(|i| h[(i, i)].clone()).product()
    }

    pub fn is_unit(&self, x: &QuotElement) -> bool {
        self.phi(x).is_one()
    }

    /// Exact division (B2): solve `c * b = a` as a linear system against the
    /// representation matrix of `b` stacked on the basis of `m`. The kernel
    /// projection is the lift of `Ann(b)`.
    pub fn div(&self, a: &QuotElement, b: &QuotElement) -> Division {
        let d = self.degree();
        let rep = self.ring.rep_matrix(&self.lift(b));
        let stacked = rep.stack(self.modulus.basis());
        let target = self.lift(a);
        let (sol, ker) = match intmat::solve_mod(&stacked, target.coords(), &self.big_n) {
            Some((y, ker)) => (Some(y), ker),
            None => {
                let (_, ker) = intmat::solve_mod(&stacked, &vec![BigInt::zero(); d], &self.big_n)
                    .expect("homogeneous system always solvable");
                (None, ker)
            }
        };
        let ann_rows: Vec<Vec<BigInt>> =
            (0..ker.rows()).map(|i| ker.row(i)[..d].to_vec()).collect();
        let annihilator = intmat::hnf_modular(&IntMat::from_rows(ann_rows), &self.big_n);
        let quotient =
            sol.map(|y| self.project(&RingElement::new(y[..d].to_vec())));
        Division { quotient, annihilator }
    }

    /// Euclidean division (B3): `a = q b + r` with `r = 0` or
    /// `phi(r) < phi(b)`. Divisibility is tested first; otherwise quotients
    /// are sampled uniformly until the remainder drops below `phi(b)`.
    pub fn eudiv(&self, a: &QuotElement, b: &QuotElement, rng: &mut Prng) -> Result<(QuotElement, QuotElement)> {
        self.eudiv_with_rounds(a, b, rng).map(|(q, r, _)| (q, r))
    }

    /// Same as [`eudiv`](Self::eudiv) but also reports the number of sampling
    /// rounds used (0 when the divisibility pre-check succeeds).
    pub fn eudiv_with_rounds(
        &self,
        a: &QuotElement,
        b: &QuotElement,
        rng: &mut Prng,
    ) -> Result<(QuotElement, QuotElement, u64)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.div(a, b).quotient {
            return Ok((q, self.zero(), 0));
        }
        let phi_b = self.phi(b);
        for round in 1..=SAMPLING_BUDGET {
            let q = self.random_element(rng);
            let r = self.sub(a, &self.mul(&q, b));
            if self.phi(&r) < phi_b {
                return Ok((q, r, round));
            }
        }
        Err(Error::SamplingBudgetExhausted)
    }

    /// Ideal-image generator (B6): an element `c` with `(c) = image of a` in
    /// `O/m`, certified by the lattice equality `(a, m) = (c) + (N)`.
    pub fn gen(&self, a: &Ideal, rng: &mut Prng) -> Result<QuotElement> {
        self.gen_with_rounds(a, rng).map(|(c, _)| c)
    }

    pub fn gen_with_rounds(&self, a: &Ideal, rng: &mut Prng) -> Result<(QuotElement, u64)> {
        let target = a.sum(&self.ring, &self.modulus);
        let n2 = &self.big_n * &self.big_n;
        for round in 1..=SAMPLING_BUDGET {
            let coeffs: Vec<BigInt> = (0..self.degree())
                .map(|_| rng.gen_bigint_range(&BigInt::zero(), &n2))
                .collect();
            let c = RingElement::new(IntMat::vec_mul(&coeffs, target.basis()));
            if self.certifies_generator(&c, &target) {
                return Ok((self.project(&c), round));
            }
        }
        Err(Error::SamplingBudgetExhausted)
    }

    /// Deterministic variant: tries the Hermite basis rows of `(a, m)` first,
    /// then falls back to sampling from a PRNG seeded canonically by the
    /// target lattice. The result depends only on the ideal, making it usable
    /// as a canonical associate for Howell normalization.
    pub fn gen_canonical(&self, a: &Ideal) -> Result<QuotElement> {
        let target = a.sum(&self.ring, &self.modulus);
        for i in 0..self.degree() {
            let c = RingElement::new(target.basis().row_vec(i));
            if self.certifies_generator(&c, &target) {
                return Ok(self.project(&c));
            }
        }
        let mut seeds: Vec<&BigInt> = vec![&self.big_n];
        let basis = target.basis();
        for i in 0..basis.rows() {
            seeds.extend(basis.row(i).iter());
        }
        let mut rng = crate::rng::canonical(&seeds);
        let n2 = &self.big_n * &self.big_n;
        for _ in 0..SAMPLING_BUDGET {
            let coeffs: Vec<BigInt> = (0..self.degree())
                .map(|_| rng.gen_bigint_range(&BigInt::zero(), &n2))
                .collect();
            let c = RingElement::new(IntMat::vec_mul(&coeffs, target.basis()));
            if self.certifies_generator(&c, &target) {
                return Ok(self.project(&c));
            }
        }
        Err(Error::SamplingBudgetExhausted)
    }

    fn certifies_generator(&self, c: &RingElement, target: &Ideal) -> bool {
        let rep = self.ring.rep_matrix(c);
        let with_n = rep.stack(&IntMat::scalar(self.degree(), &self.big_n));
        intmat::hnf_modular(&with_n, &self.big_n) == *target.basis()
    }

    /// Annihilator generator (B5): kernel lattice from the division solve,
    /// then a generator of its image.
    pub fn ann(&self, b: &QuotElement, rng: &mut Prng) -> Result<QuotElement> {
        let division = self.div(&self.zero(), b);
        let ideal = Ideal::from_hnf_public(division.annihilator);
        self.gen(&ideal, rng)
    }

    /// Minimal quotient: `c` with `b c = a` and `phi(c) = phi(a) / phi(b)`.
    /// A fixed quotient is adjusted by uniform samples from the annihilator
    /// lattice until the Euclidean value is minimal.
    pub fn min_quotient(
        &self,
        a: &QuotElement,
        b: &QuotElement,
        rng: &mut Prng,
    ) -> Result<QuotElement> {
        let division = self.div(a, b);
        let c0 = division.quotient.ok_or(Error::NotDivisible)?;
        let phi_a = self.phi(a);
        let phi_b = self.phi(b);
        debug_assert!((&phi_a % &phi_b).is_zero());
        let target = &phi_a / &phi_b;
        if self.phi(&c0) == target {
            return Ok(c0);
        }
        let ann = division.annihilator;
        for _ in 0..SAMPLING_BUDGET {
            let coeffs: Vec<BigInt> = (0..self.degree())
                .map(|_| rng.gen_bigint_range(&BigInt::zero(), &self.big_n))
                .collect();
            let q = self.project(&RingElement::new(IntMat::vec_mul(&coeffs, &ann)));
            let c = self.add(&c0, &q);
            if self.phi(&c) == target {
                return Ok(c);
            }
        }
        Err(Error::SamplingBudgetExhausted)
    }

    /// Solve `u e + v f = 1` for coprime `e`, `f` as a linear system against
    /// both representation matrices and the modulus basis. Deterministic.
    pub fn bezout_coprime(
        &self,
        e: &QuotElement,
        f: &QuotElement,
    ) -> Result<(QuotElement, QuotElement)> {
        let d = self.degree();
        let rep_e = self.ring.rep_matrix(&self.lift(e));
        let rep_f = self.ring.rep_matrix(&self.lift(f));
        let stacked = rep_e.stack(&rep_f).stack(self.modulus.basis());
        let one = self.ring.one();
        match intmat::solve_mod(&stacked, one.coords(), &self.big_n) {
            Some((y, _)) => {
                let u = self.project(&RingElement::new(y[..d].to_vec()));
                let v = self.project(&RingElement::new(y[d..2 * d].to_vec()));
                Ok((u, v))
            }
            None => Err(Error::NoSolution),
        }
    }

    /// Extended gcd (B4): `g` generates `(a, b)`, `g = s a + t b`,
    /// `u a + v b = 0` and `s v - u t = 1`. Built from one generator search,
    /// two minimal quotients and one Bezout solve.
    pub fn xgcd(
        &self,
        a: &QuotElement,
        b: &QuotElement,
        rng: &mut Prng,
    ) -> Result<XgcdTuple<QuotElement>> {
        if a.is_zero() && b.is_zero() {
            return Ok(XgcdTuple {
                g: self.zero(),
                s: self.one(),
                t: self.zero(),
                u: self.zero(),
                v: self.one(),
            });
        }
        let joint = self.pair_ideal(a, b);
        let g = self.gen(&joint, rng)?;
        let e = self.min_quotient(a, &g, rng)?;
        let f = self.min_quotient(b, &g, rng)?;
        let (u, v) = self.bezout_coprime(&e, &f)?;
        Ok(XgcdTuple { g, s: u, t: v, u: self.neg(&f), v: e })
    }

    /// The ideal `(a) + (b) + m`.
    pub fn pair_ideal(&self, a: &QuotElement, b: &QuotElement) -> Ideal {
        let rep_a = self.ring.rep_matrix(&self.lift(a));
        let rep_b = self.ring.rep_matrix(&self.lift(b));
        let stacked = rep_a.stack(&rep_b).stack(self.modulus.basis());
        Ideal::from_hnf_public(intmat::hnf_modular(&stacked, &self.big_n))
    }

    /// Canonical associate: `(u, g)` with `u` a unit, `u x = g` and `g` the
    /// canonical generator of `(x) + m`. Deterministic in `x`.
    pub fn unit_normalize(&self, x: &QuotElement) -> Result<(QuotElement, QuotElement)> {
        if x.is_zero() {
            return Ok((self.one(), self.zero()));
        }
        let ideal = self.element_ideal(x);
        let g = self.gen_canonical(&ideal)?;
        if &g == x {
            return Ok((self.one(), g));
        }
        // u x = g with phi(u) = phi(g)/phi(x) = 1, searched deterministically.
        let mut seeds: Vec<&BigInt> = vec![&self.big_n];
        seeds.extend(x.coords.iter());
        seeds.extend(g.coords.iter());
        let mut rng = crate::rng::canonical(&seeds);
        let u = self.min_quotient(&g, x, &mut rng)?;
        debug_assert!(self.is_unit(&u));
        Ok((u, g))
    }

    /// Canonical coset representative of `x` modulo the ideal `(pivot) + m`:
    /// returns `(q, rep)` with `x = q * pivot + rep` and `rep` the reduction
    /// of the lift of `x` by the Hermite basis of the ideal. Deterministic;
    /// `q = 0` whenever `x` is already reduced.
    pub fn coset_reduce(&self, x: &QuotElement, pivot: &QuotElement) -> Result<(QuotElement, QuotElement)> {
        let lattice = self.element_ideal_lattice(pivot);
        let mut v = self.lift(x).into_coords();
        for i in (0..self.degree()).rev() {
            let q = v[i].div_floor(&lattice[(i, i)]);
            if !q.is_zero() {
                for j in 0..self.degree() {
                    let t = &q * &lattice[(i, j)];
                    v[j] -= t;
                }
            }
        }
        let rep = self.project(&RingElement::new(v));
        if rep == *x {
            return Ok((self.zero(), rep));
        }
        let diff = self.sub(x, &rep);
        let q = self
            .div(&diff, pivot)
            .quotient
            .ok_or(Error::NotDivisible)?;
        Ok((q, rep))
    }
}
