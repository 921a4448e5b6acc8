//! Ring-generic strong echelon forms.
//!
//! A strong echelon form of a module `M <= R^m` is a square matrix whose row
//! `i` is zero or has its last nonzero entry in column `i` (S1), such that
//! rows `1..i` generate the elements of `M` supported on the first `i`
//! columns (S2). The engine works over any ring exposing the basic
//! operations through [`EchelonRing`]; it never inspects ring internals, so
//! rings with zero divisors and no available factorization are first-class.
//!
//! The triangularization is the pivot-driven right-to-left variant: pivot
//! columns are processed from last to first and each column's entries are
//! folded into its pivot row with 2x2 unimodular transforms. The annihilator
//! stage then augments the matrix with one working row per diagonal entry,
//! reusing it across columns; a row whose diagonal is zero is moved into the
//! working row wholesale so the final shape satisfies (S1) directly.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::quotient::{QuotElement, QuotientRing};
use crate::residue::{ResidueRingZ, XgcdTuple};
use crate::rng::Prng;

/// The capability bundle consumed by the echelon engine: arithmetic (B1),
/// exact division (B2), Euclidean division (B3), extended gcd with a
/// unimodular certificate (B4), annihilators (B5), ideal-image generators
/// (B6), and canonical associates/coset representatives for Howell
/// normalization.
pub trait EchelonRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    type IdealHandle;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn exact_div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
    fn eudiv(&self, a: &Self::Elem, b: &Self::Elem, rng: &mut Prng)
        -> Result<(Self::Elem, Self::Elem)>;
    fn xgcd(&self, a: &Self::Elem, b: &Self::Elem, rng: &mut Prng)
        -> Result<XgcdTuple<Self::Elem>>;
    fn ann(&self, a: &Self::Elem, rng: &mut Prng) -> Result<Self::Elem>;
    fn ideal_gen(&self, handle: &Self::IdealHandle, rng: &mut Prng) -> Result<Self::Elem>;
    /// Canonical associate: `(u, g)` with `u` a unit and `u a = g`;
    /// deterministic, constant on associate classes.
    fn unit_normalize(&self, a: &Self::Elem) -> Result<(Self::Elem, Self::Elem)>;
    /// Canonical coset representative of `x` modulo the ideal generated by
    /// `pivot` (and the ring modulus): `(q, rep)` with `x = q pivot + rep`;
    /// `q = 0` when `x` is already reduced.
    fn coset_reduce(&self, x: &Self::Elem, pivot: &Self::Elem)
        -> Result<(Self::Elem, Self::Elem)>;
}

impl EchelonRing for ResidueRingZ {
    type Elem = BigInt;
    type IdealHandle = BigInt;

    fn zero(&self) -> BigInt {
        ResidueRingZ::zero(self)
    }
    fn one(&self) -> BigInt {
        ResidueRingZ::one(self)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        num_traits::Zero::is_zero(a)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        ResidueRingZ::add(self, a, b)
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        ResidueRingZ::sub(self, a, b)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        ResidueRingZ::mul(self, a, b)
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        ResidueRingZ::neg(self, a)
    }
    fn exact_div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        ResidueRingZ::exact_div(self, a, b)
    }
    fn eudiv(&self, a: &BigInt, b: &BigInt, _rng: &mut Prng) -> Result<(BigInt, BigInt)> {
        ResidueRingZ::eudiv(self, a, b)
    }
    fn xgcd(&self, a: &BigInt, b: &BigInt, _rng: &mut Prng) -> Result<XgcdTuple<BigInt>> {
        Ok(ResidueRingZ::xgcd(self, a, b))
    }
    fn ann(&self, a: &BigInt, _rng: &mut Prng) -> Result<BigInt> {
        Ok(ResidueRingZ::ann(self, a))
    }
    fn ideal_gen(&self, handle: &BigInt, _rng: &mut Prng) -> Result<BigInt> {
        Ok(self.project(&self.phi(handle)))
    }
    fn unit_normalize(&self, a: &BigInt) -> Result<(BigInt, BigInt)> {
        Ok(ResidueRingZ::unit_normalize(self, a))
    }
    fn coset_reduce(&self, x: &BigInt, pivot: &BigInt) -> Result<(BigInt, BigInt)> {
        use num_integer::Integer;
        let g = self.phi(pivot);
        let rep = x.mod_floor(&g);
        if rep == *x {
            return Ok((ResidueRingZ::zero(self), rep));
        }
        let q = ResidueRingZ::exact_div(self, &self.sub(x, &rep), pivot)
            .ok_or(Error::NotDivisible)?;
        Ok((q, rep))
    }
}

impl EchelonRing for QuotientRing {
    type Elem = QuotElement;
    type IdealHandle = Ideal;

    fn zero(&self) -> QuotElement {
        QuotientRing::zero(self)
    }
    fn one(&self) -> QuotElement {
        QuotientRing::one(self)
    }
    fn is_zero(&self, a: &QuotElement) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        QuotientRing::add(self, a, b)
    }
    fn sub(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        QuotientRing::sub(self, a, b)
    }
    fn mul(&self, a: &QuotElement, b: &QuotElement) -> QuotElement {
        QuotientRing::mul(self, a, b)
    }
    fn neg(&self, a: &QuotElement) -> QuotElement {
        QuotientRing::neg(self, a)
    }
    fn exact_div(&self, a: &QuotElement, b: &QuotElement) -> Option<QuotElement> {
        QuotientRing::div(self, a, b).quotient
    }
    fn eudiv(&self, a: &QuotElement, b: &QuotElement, rng: &mut Prng)
        -> Result<(QuotElement, QuotElement)> {
        QuotientRing::eudiv(self, a, b, rng)
    }
    fn xgcd(&self, a: &QuotElement, b: &QuotElement, rng: &mut Prng)
        -> Result<XgcdTuple<QuotElement>> {
        QuotientRing::xgcd(self, a, b, rng)
    }
    fn ann(&self, a: &QuotElement, rng: &mut Prng) -> Result<QuotElement> {
        QuotientRing::ann(self, a, rng)
    }
    fn ideal_gen(&self, handle: &Ideal, rng: &mut Prng) -> Result<QuotElement> {
        QuotientRing::gen(self, handle, rng)
    }
    fn unit_normalize(&self, a: &QuotElement) -> Result<(QuotElement, QuotElement)> {
        QuotientRing::unit_normalize(self, a)
    }
    fn coset_reduce(&self, x: &QuotElement, pivot: &QuotElement)
        -> Result<(QuotElement, QuotElement)> {
        QuotientRing::coset_reduce(self, x, pivot)
    }
}

/// A dense matrix over an [`EchelonRing`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Clone> ModMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        ModMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        ModMatrix { rows, cols, entries: vec![value; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> ModMatrix<U> {
        ModMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }
}

/// Apply the 2x2 unimodular transform from xgcd of the entries at `col` to
/// rows `p` and `r`, leaving the gcd at `(p, col)` and zero at `(r, col)`.
/// Cheap paths: swap when the pivot entry is zero, a single elementary
/// subtraction when the pivot divides the other entry.
fn clear_entry<R: EchelonRing>(
    ring: &R,
    mat: &mut ModMatrix<R::Elem>,
    p: usize,
    r: usize,
    col: usize,
    rng: &mut Prng,
) -> Result<bool> {
    // Returns whether a row swap happened (for determinant sign tracking).
    if ring.is_zero(mat.at(r, col)) {
        return Ok(false);
    }
    if ring.is_zero(mat.at(p, col)) {
        for j in 0..mat.cols() {
            let a = mat.at(p, j).clone();
            let b = mat.at(r, j).clone();
            mat.set(p, j, b);
            mat.set(r, j, a);
        }
        return Ok(true);
    }
    if let Some(q) = ring.exact_div(mat.at(r, col), mat.at(p, col)) {
        for j in 0..mat.cols() {
            let t = ring.sub(mat.at(r, j), &ring.mul(&q, mat.at(p, j)));
            mat.set(r, j, t);
        }
        return Ok(false);
    }
    let t = ring.xgcd(mat.at(p, col), mat.at(r, col), rng)?;
    for j in 0..mat.cols() {
        let vp = mat.at(p, j).clone();
        let vr = mat.at(r, j).clone();
        mat.set(p, j, ring.add(&ring.mul(&t.s, &vp), &ring.mul(&t.t, &vr)));
        mat.set(r, j, ring.add(&ring.mul(&t.u, &vp), &ring.mul(&t.v, &vr)));
    }
    Ok(false)
}

/// Right-to-left column triangularization (step (i) of the strong echelon
/// algorithm). Returns the matrix with the pivot row for column `c` at row
/// `n - m + c` and all rows above the pivot block zero, plus the determinant
/// sign of the accumulated transform.
pub fn triangularize<R: EchelonRing>(
    ring: &R,
    mat: &ModMatrix<R::Elem>,
    rng: &mut Prng,
) -> Result<(ModMatrix<R::Elem>, i8)> {
    let m = mat.cols();
    let mut work = if mat.rows() < m {
        let mut rows: Vec<Vec<R::Elem>> =
            (0..mat.rows()).map(|i| mat.row(i).to_vec()).collect();
        while rows.len() < m {
            rows.push(vec![ring.zero(); m]);
        }
        ModMatrix::from_rows(rows)
    } else {
        mat.clone()
    };
    let n = work.rows();
    let mut sign = 1i8;
    for col in (0..m).rev() {
        let target = n - m + col;
        for r in (0..target).rev() {
            if clear_entry(ring, &mut work, target, r, col, rng)? {
                sign = -sign;
            }
        }
    }
    Ok((work, sign))
}

/// Strong echelon form of the row span; output is square `m x m` with zero
/// rows retained in place.
pub fn strong_echelon<R: EchelonRing>(
    ring: &R,
    mat: &ModMatrix<R::Elem>,
    rng: &mut Prng,
) -> Result<ModMatrix<R::Elem>> {
    let m = mat.cols();
    let (tri, _) = triangularize(ring, mat, rng)?;
    let n = tri.rows();
    // Extract the square block; rows above it are zero by construction.
    let mut h = ModMatrix::from_rows((n - m..n).map(|i| tri.row(i).to_vec()).collect());
    debug_assert!((0..n - m).all(|i| tri.row(i).iter().all(|x| ring.is_zero(x))));

    // Annihilator augmentation: one working row, reused across columns.
    let mut work: Vec<R::Elem> = vec![ring.zero(); m];
    for j in (0..m).rev() {
        if !ring.is_zero(h.at(j, j)) {
            let c = ring.ann(h.at(j, j), rng)?;
            if ring.is_zero(&c) {
                continue;
            }
            for (k, w) in work.iter_mut().enumerate() {
                *w = ring.mul(&c, h.at(j, k));
            }
        } else {
            // Move the row into the working slot so (S1) holds afterwards.
            for (k, w) in work.iter_mut().enumerate() {
                *w = h.at(j, k).clone();
                h.set(j, k, ring.zero());
            }
        }
        for i in (0..j).rev() {
            if ring.is_zero(&work[i]) {
                continue;
            }
            if ring.is_zero(h.at(i, i)) {
                // Install the working row as the new pivot row.
                for k in 0..m {
                    let w = std::mem::replace(&mut work[k], h.at(i, k).clone());
                    h.set(i, k, w);
                }
                continue;
            }
            if let Some(q) = ring.exact_div(&work[i], h.at(i, i)) {
                for k in 0..m {
                    work[k] = ring.sub(&work[k], &ring.mul(&q, h.at(i, k)));
                }
                continue;
            }
            let t = ring.xgcd(h.at(i, i), &work[i], rng)?;
            for k in 0..m {
                let vp = h.at(i, k).clone();
                let vr = work[k].clone();
                h.set(i, k, ring.add(&ring.mul(&t.s, &vp), &ring.mul(&t.t, &vr)));
                work[k] = ring.add(&ring.mul(&t.u, &vp), &ring.mul(&t.v, &vr));
            }
        }
        debug_assert!(work.iter().all(|x| ring.is_zero(x)));
    }
    debug_assert!(satisfies_shape(ring, &h));
    Ok(h)
}

/// (S1): row i is zero or its last nonzero entry sits in column i.
pub fn satisfies_shape<R: EchelonRing>(ring: &R, h: &ModMatrix<R::Elem>) -> bool {
    for i in 0..h.rows() {
        let last = (0..h.cols()).rev().find(|&j| !ring.is_zero(h.at(i, j)));
        if let Some(j) = last {
            if j != i {
                return false;
            }
        }
    }
    true
}

/// Howell-style canonicalization: pivots are replaced by their canonical
/// associates and entries below each pivot by canonical coset
/// representatives. Two strong echelon forms with equal span map to the
/// identical matrix.
pub fn howell_normalize<R: EchelonRing>(
    ring: &R,
    h: &ModMatrix<R::Elem>,
) -> Result<ModMatrix<R::Elem>> {
    let m = h.cols();
    let mut out = h.clone();
    for i in 0..m {
        if ring.is_zero(out.at(i, i)) {
            continue;
        }
        let (u, g) = ring.unit_normalize(out.at(i, i))?;
        if !ring.is_zero(&ring.sub(&g, out.at(i, i))) {
            for j in 0..m {
                let t = ring.mul(&u, out.at(i, j));
                out.set(i, j, t);
            }
            out.set(i, i, g);
        }
    }
    for k in 0..m {
        for i in (0..k).rev() {
            if ring.is_zero(out.at(i, i)) {
                continue;
            }
            let (q, rep) = ring.coset_reduce(out.at(k, i), out.at(i, i))?;
            if ring.is_zero(&q) {
                continue;
            }
            for j in 0..m {
                let t = ring.sub(out.at(k, j), &ring.mul(&q, out.at(i, j)));
                out.set(k, j, t);
            }
            out.set(k, i, rep);
        }
    }
    Ok(out)
}

/// Half-modulus lift: given `a_prime` with `pi_m(a_prime)` a strong echelon
/// form of `pi_m(M)`, the matrix `b_gen * a_prime + a_gen * I` has every
/// nonzero diagonal entry a divisor of `a_gen`, making it a strong echelon
/// form of `M + a_gen * R^n` over the full ring.
pub fn diagonal_adjust<R: EchelonRing>(
    ring: &R,
    a_prime: &ModMatrix<R::Elem>,
    a_gen: &R::Elem,
    b_gen: &R::Elem,
) -> ModMatrix<R::Elem> {
    let mut out = a_prime.map(|x| ring.mul(b_gen, x));
    for i in 0..out.rows().min(out.cols()) {
        let t = ring.add(out.at(i, i), a_gen);
        out.set(i, i, t);
    }
    out
}

/// Idempotent recombination: with `a b = 0`, `e a + f b = 1`, `a_form` a
/// strong echelon form of `M + aR^n` and `b_form` one of `M + bR^n`, the
/// matrix `f b * a_form + e a * b_form` is a strong echelon form of `M`.
pub fn crt_combine<R: EchelonRing>(
    ring: &R,
    a_form: &ModMatrix<R::Elem>,
    b_form: &ModMatrix<R::Elem>,
    ea: &R::Elem,
    fb: &R::Elem,
) -> ModMatrix<R::Elem> {
    assert_eq!(a_form.rows(), b_form.rows());
    assert_eq!(a_form.cols(), b_form.cols());
    let mut out = ModMatrix::filled(a_form.rows(), a_form.cols(), ring.zero());
    for i in 0..out.rows() {
        for j in 0..out.cols() {
            let v = ring.add(
                &ring.mul(fb, a_form.at(i, j)),
                &ring.mul(ea, b_form.at(i, j)),
            );
            out.set(i, j, v);
        }
    }
    out
}
