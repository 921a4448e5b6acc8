//! Integral and fractional ideals as full-rank lattices with Hermite bases.
//!
//! An ideal carries its `d x d` pivot-last Hermite basis (rows are
//! `w`-coordinates), its norm (the product of the pivots) and its minimum
//! (the positive generator of the intersection with `Z`, which in this
//! orientation is just the top-left entry). Two-element representations are
//! not used; inversion goes through the dual lattice `(O : a)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::{self, IntMat};
use crate::ring::{FieldElement, NumberRing, RingElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    basis: IntMat,
    norm: BigInt,
    minimum: BigInt,
}

impl Ideal {
    /// Smallest ideal containing the given elements: the input is closed
    /// under multiplication by all basis elements before taking the Hermite
    /// basis. Errors if the lattice is not of full rank.
    pub fn from_generators(ring: &NumberRing, gens: &[RingElement]) -> Result<Ideal> {
        let d = ring.degree();
        let mut rows = Vec::with_capacity(gens.len() * d);
        for g in gens {
            for i in 0..d {
                rows.push(ring.mul(g, &ring.basis_element(i)).into_coords());
            }
        }
        if rows.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        Self::from_lattice(ring, IntMat::from_rows(rows))
    }

    /// Wrap a lattice that is already known to be an ideal (closed under
    /// multiplication by the ring); checked only in debug builds.
    pub(crate) fn from_lattice(ring: &NumberRing, rows: IntMat) -> Result<Ideal> {
        let h = intmat::hnf(&rows);
        if h.rows() != ring.degree() {
            return Err(Error::ZeroIdeal);
        }
        let ideal = Self::from_hnf(h);
        debug_assert!(ideal.is_closed(ring));
        Ok(ideal)
    }

    /// Same, with the span already containing `modulus * Z^d`; bounds entry
    /// growth during the Hermite reduction.
    pub(crate) fn from_lattice_mod(
        ring: &NumberRing,
        rows: IntMat,
        modulus: &BigInt,
    ) -> Result<Ideal> {
        if modulus.is_zero() {
            return Self::from_lattice(ring, rows);
        }
        let h = intmat::hnf_modular(&rows, &modulus.abs());
        if h.rows() != ring.degree() {
            return Err(Error::ZeroIdeal);
        }
        let ideal = Self::from_hnf(h);
        debug_assert!(ideal.is_closed(ring));
        Ok(ideal)
    }

    fn from_hnf(h: IntMat) -> Ideal {
        let norm = (0..h.rows()).map(|i| h[(i, i)].clone()).product();
        let minimum = h[(0, 0)].clone();
        Ideal { basis: h, norm, minimum }
    }

    pub(crate) fn from_hnf_public(h: IntMat) -> Ideal {
        Self::from_hnf(h)
    }

    /// Validating constructor for untrusted bases: checks full rank and
    /// closure under multiplication by every basis element.
    pub fn from_basis_checked(ring: &NumberRing, rows: IntMat) -> Result<Ideal> {
        if rows.cols() != ring.degree() {
            return Err(Error::DimensionMismatch("ideal basis has wrong width".into()));
        }
        let h = intmat::hnf(&rows);
        if h.rows() != ring.degree() {
            return Err(Error::ZeroIdeal);
        }
        let ideal = Self::from_hnf(h);
        if !ideal.is_closed(ring) {
            return Err(Error::InvalidInput("lattice is not an ideal".into()));
        }
        Ok(ideal)
    }

    fn is_closed(&self, ring: &NumberRing) -> bool {
        let d = ring.degree();
        for i in 0..d {
            let w = ring.basis_element(i);
            for r in 0..d {
                let row = RingElement::new(self.basis.row_vec(r));
                let prod = ring.mul(&row, &w);
                if !self.contains(&prod) {
                    return false;
                }
            }
        }
        true
    }

    pub fn one(ring: &NumberRing) -> Ideal {
        Self::from_hnf(IntMat::identity(ring.degree()))
    }

    pub fn principal(ring: &NumberRing, x: &RingElement) -> Result<Ideal> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Self::from_lattice(ring, ring.rep_matrix(x))
    }

    pub fn from_integer(ring: &NumberRing, n: &BigInt) -> Result<Ideal> {
        if n.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Ok(Self::from_hnf(IntMat::scalar(ring.degree(), &n.abs())))
    }

    pub fn basis(&self) -> &IntMat {
        &self.basis
    }

    pub fn norm(&self) -> &BigInt {
        &self.norm
    }

    pub fn minimum(&self) -> &BigInt {
        &self.minimum
    }

    pub fn is_one(&self) -> bool {
        self.norm.is_one()
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        intmat::solve(&self.basis, x.coords()).is_some()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        (0..other.basis.rows())
            .all(|i| self.contains(&RingElement::new(other.basis.row_vec(i))))
    }

    pub fn sum(&self, ring: &NumberRing, other: &Ideal) -> Ideal {
        let stacked = self.basis.stack(&other.basis);
        // The sum contains both minima; their gcd bounds the reduction.
        let g = self.minimum.gcd(&other.minimum);
        Self::from_lattice_mod(ring, stacked, &g).expect("sum of full-rank ideals")
    }

    pub fn product(&self, ring: &NumberRing, other: &Ideal) -> Ideal {
        let d = ring.degree();
        let mut rows = Vec::with_capacity(d * d);
        for i in 0..d {
            let a = RingElement::new(self.basis.row_vec(i));
            for j in 0..d {
                let b = RingElement::new(other.basis.row_vec(j));
                rows.push(ring.mul(&a, &b).into_coords());
            }
        }
        let m = &self.minimum * &other.minimum;
        Self::from_lattice_mod(ring, IntMat::from_rows(rows), &m)
            .expect("product of full-rank ideals")
    }

    /// Product with a principal ideal `(x)` via the representation matrix.
    pub fn mul_element(&self, ring: &NumberRing, x: &RingElement) -> Result<Ideal> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Self::from_lattice(ring, self.basis.mul(&ring.rep_matrix(x)))
    }

    pub fn mul_integer(&self, q: &BigInt) -> Result<Ideal> {
        if q.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        Ok(Self::from_hnf(self.basis.scale(&q.abs())))
    }

    pub fn intersect(&self, _ring: &NumberRing, other: &Ideal) -> Result<Ideal> {
        let h = intmat::lattice_intersect(&self.basis, &other.basis)?;
        Ok(Self::from_hnf(h))
    }

    /// Inverse as a fractional ideal: `(O : a) = {x in K : x a <= O}`,
    /// computed as the solution lattice of `v * M_b = 0 (mod N)` over all
    /// basis elements `b`, scaled by `1/N`.
    pub fn invert(&self, ring: &NumberRing) -> Result<FracIdeal> {
        let d = ring.degree();
        let n = &self.norm;
        // Stack the representation matrices side by side: one kernel
        // computation mod N covers all d constraints.
        let mut rows: Vec<Vec<BigInt>> = vec![Vec::with_capacity(d * d); d];
        for j in 0..d {
            let b = RingElement::new(self.basis.row_vec(j));
            let m = ring.rep_matrix(&b);
            for (i, row) in rows.iter_mut().enumerate() {
                row.extend(m.row_vec(i));
            }
        }
        let a = IntMat::from_rows(rows);
        let (_, ker) = intmat::solve_mod(&a, &vec![BigInt::zero(); d * d], n)
            .expect("homogeneous system is solvable");
        let num = Self::from_lattice(ring, ker)?;
        FracIdeal::new(num, n.clone())
    }
}

/// Membership of a field element in an integral ideal.
pub fn ideal_contains_field(ideal: &Ideal, x: &FieldElement) -> bool {
    match intmat::solve(ideal.basis(), x.num().coords()) {
        None => false,
        Some(y) => y.iter().all(|c| (c % x.den()).is_zero()),
    }
}

/// For coprime integral ideals `a`, `b`, elements `x in a`, `y in b` with
/// `x + y = 1`, found by expressing 1 over the stacked bases.
pub fn idempotent_split(
    ring: &NumberRing,
    a: &Ideal,
    b: &Ideal,
) -> Result<(RingElement, RingElement)> {
    let d = ring.degree();
    let stacked = a.basis().stack(b.basis());
    let one = ring.one();
    let t = match intmat::solve(&stacked, one.coords()) {
        Some(t) => t,
        None => return Err(Error::IdealsNotCoprime),
    };
    let x = RingElement::new(IntMat::vec_mul(&t[..d], a.basis()));
    let y = ring.sub(&one, &x);
    debug_assert!(a.contains(&x) && b.contains(&y));
    Ok((x, y))
}

/// A fractional ideal `num / den` with integral numerator and positive
/// rational-integer denominator, kept reduced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracIdeal {
    num: Ideal,
    den: BigInt,
}

impl FracIdeal {
    pub fn new(num: Ideal, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut f = FracIdeal { num, den: den.abs() };
        f.reduce();
        Ok(f)
    }

    pub fn from_integral(num: Ideal) -> Self {
        FracIdeal { num, den: BigInt::one() }
    }

    pub fn one(ring: &NumberRing) -> Self {
        Self::from_integral(Ideal::one(ring))
    }

    pub fn num(&self) -> &Ideal {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_integral(&self) -> Option<&Ideal> {
        self.is_integral().then_some(&self.num)
    }

    fn reduce(&mut self) {
        if self.den.is_one() {
            return;
        }
        let basis = self.num.basis();
        let mut g = self.den.clone();
        'outer: for i in 0..basis.rows() {
            for j in 0..basis.cols() {
                g = g.gcd(&basis[(i, j)]);
                if g.is_one() {
                    break 'outer;
                }
            }
        }
        if !g.is_one() {
            let scaled = basis_div(basis, &g);
            self.num = Ideal::from_hnf_public(scaled);
            self.den /= g;
        }
    }

    pub fn product(&self, ring: &NumberRing, other: &FracIdeal) -> FracIdeal {
        FracIdeal::new(self.num.product(ring, &other.num), &self.den * &other.den)
            .expect("nonzero denominator")
    }

    pub fn sum(&self, ring: &NumberRing, other: &FracIdeal) -> FracIdeal {
        let a = self.num.mul_integer(&other.den).expect("nonzero");
        let b = other.num.mul_integer(&self.den).expect("nonzero");
        FracIdeal::new(a.sum(ring, &b), &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn invert(&self, ring: &NumberRing) -> Result<FracIdeal> {
        let inv = self.num.invert(ring)?;
        FracIdeal::new(inv.num.mul_integer(&self.den)?, inv.den)
    }

    /// Product with the principal fractional ideal `(x)`.
    pub fn mul_field_element(&self, ring: &NumberRing, x: &FieldElement) -> Result<FracIdeal> {
        if x.is_zero() {
            return Err(Error::ZeroIdeal);
        }
        let num = self.num.mul_element(ring, x.num())?;
        FracIdeal::new(num, &self.den * x.den())
    }

    /// Intersection with `O`.
    pub fn intersect_ring(&self, ring: &NumberRing) -> Result<Ideal> {
        if self.is_integral() {
            return Ok(self.num.clone());
        }
        let scaled_ring = IntMat::scalar(ring.degree(), &self.den);
        let h = intmat::lattice_intersect(self.num.basis(), &scaled_ring)?;
        // h is den * (self intersect O).
        Ok(Ideal::from_hnf_public(basis_div(&h, &self.den)))
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        // x in num/den  <=>  den * x in num.
        let scaled = FieldElement::new(
            RingElement::new(x.num().coords().iter().map(|c| c * &self.den).collect()),
            x.den().clone(),
        )
        .expect("nonzero denominator");
        ideal_contains_field(&self.num, &scaled)
    }
}

fn basis_div(m: &IntMat, g: &BigInt) -> IntMat {
    let rows = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| x / g).collect())
        .collect();
    IntMat::from_rows(rows)
}
