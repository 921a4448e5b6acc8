//! Rings of rank `d` over `Z` given by structure constants.
//!
//! A ring is described by an integral basis `w_1, ..., w_d` with `w_1 = 1`
//! and the constants `Gamma[i][j][k]` of `w_i * w_j = sum_k Gamma[i][j][k] w_k`.
//! Elements are coordinate vectors; matrices act on the right of row vectors
//! everywhere in this crate.
//!
//! Maximality of the order is *not* verified; the pseudo-HNF theory needs a
//! Dedekind domain and the built-in constructors only produce verified
//! maximal orders (`Z`, quadratic fields).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::intmat::{self, IntMat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberRing {
    degree: usize,
    /// Flattened d^3 array, entry (i, j, k) at ((i * d) + j) * d + k.
    gamma: Vec<BigInt>,
    labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement {
    coords: Vec<BigInt>,
}

impl RingElement {
    pub fn new(coords: Vec<BigInt>) -> Self {
        RingElement { coords }
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        RingElement { coords: coords.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<BigInt> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }
}

impl NumberRing {
    /// Validate structure constants and build the ring. Commutativity,
    /// associativity and that `w_1` is the identity are all checked on basis
    /// triples; the failing triple is reported.
    pub fn from_structure_constants(gamma: Vec<Vec<Vec<BigInt>>>, labels: Vec<String>) -> Result<Self> {
        let d = gamma.len();
        if d == 0 {
            return Err(Error::NotARing("degree must be >= 1".into()));
        }
        if gamma.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
            return Err(Error::NotARing("structure constants must be d x d x d".into()));
        }
        let mut flat = Vec::with_capacity(d * d * d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    flat.push(gamma[i][j][k].clone());
                }
            }
        }
        let labels = if labels.is_empty() {
            (0..d).map(|i| if i == 0 { "1".to_string() } else { format!("w{}", i + 1) }).collect()
        } else if labels.len() == d {
            labels
        } else {
            return Err(Error::NotARing("label count must match degree".into()));
        };
        let ring = NumberRing { degree: d, gamma: flat, labels };
        ring.validate()?;
        Ok(ring)
    }

    fn validate(&self) -> Result<()> {
        let d = self.degree;
        // w_1 is a two-sided identity.
        for j in 0..d {
            for k in 0..d {
                let expect = if j == k { BigInt::one() } else { BigInt::zero() };
                if *self.gamma_at(0, j, k) != expect || *self.gamma_at(j, 0, k) != expect {
                    return Err(Error::NotARing(format!("w1 * w{} is not w{}", j + 1, j + 1)));
                }
            }
        }
        // Commutativity.
        for i in 0..d {
            for j in i + 1..d {
                for k in 0..d {
                    if self.gamma_at(i, j, k) != self.gamma_at(j, i, k) {
                        return Err(Error::NotARing(format!(
                            "w{} * w{} != w{} * w{}",
                            i + 1,
                            j + 1,
                            j + 1,
                            i + 1
                        )));
                    }
                }
            }
        }
        // Associativity on basis triples.
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = self.mul(&self.mul(&self.basis_element(i), &self.basis_element(j)), &self.basis_element(k));
                    let right = self.mul(&self.basis_element(i), &self.mul(&self.basis_element(j), &self.basis_element(k)));
                    if left != right {
                        return Err(Error::NotARing(format!(
                            "(w{} w{}) w{} != w{} (w{} w{})",
                            i + 1,
                            j + 1,
                            k + 1,
                            i + 1,
                            j + 1,
                            k + 1
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The rational integers (degree 1).
    pub fn integers() -> Self {
        NumberRing {
            degree: 1,
            gamma: vec![BigInt::one()],
            labels: vec!["1".into()],
        }
    }

    /// Maximal order of `Q(sqrt(D))` for squarefree `D`: basis `{1, sqrt(D)}`
    /// for `D = 2, 3 mod 4` and `{1, (1 + sqrt(D))/2}` for `D = 1 mod 4`.
    pub fn quadratic(d: i64) -> Result<Self> {
        if d == 0 || d == 1 {
            return Err(Error::InvalidInput("D must be a squarefree integer != 0, 1".into()));
        }
        if !is_squarefree(d) {
            return Err(Error::InvalidInput(format!("{d} is not squarefree")));
        }
        let (c0, c1, label) = if d.rem_euclid(4) == 1 {
            ((d - 1) / 4, 1i64, format!("(1+sqrt({d}))/2"))
        } else {
            (d, 0, format!("sqrt({d})"))
        };
        let zero = BigInt::zero();
        let one = BigInt::one();
        let gamma = vec![
            vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]],
            vec![
                vec![zero.clone(), one.clone()],
                vec![BigInt::from(c0), BigInt::from(c1)],
            ],
        ];
        NumberRing::from_structure_constants(gamma, vec!["1".into(), label])
    }

    /// The Gaussian integers `Z[i]`.
    pub fn gaussian() -> Self {
        let mut r = NumberRing::quadratic(-1).expect("-1 is squarefree");
        r.labels[1] = "i".into();
        r
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn gamma_at(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.gamma[(i * self.degree + j) * self.degree + k]
    }

    pub fn max_gamma(&self) -> BigInt {
        self.gamma
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::one)
            .max(BigInt::one())
    }

    pub fn zero(&self) -> RingElement {
        RingElement { coords: vec![BigInt::zero(); self.degree] }
    }

    pub fn one(&self) -> RingElement {
        self.basis_element(0)
    }

    pub fn basis_element(&self, i: usize) -> RingElement {
        let mut coords = vec![BigInt::zero(); self.degree];
        coords[i] = BigInt::one();
        RingElement { coords }
    }

    pub fn from_integer(&self, n: &BigInt) -> RingElement {
        let mut coords = vec![BigInt::zero(); self.degree];
        coords[0] = n.clone();
        RingElement { coords }
    }

    fn check_degree(&self, x: &RingElement) -> Result<()> {
        if x.coords.len() != self.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, got: x.coords.len() });
        }
        Ok(())
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingElement {
        RingElement {
            coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> RingElement {
        RingElement {
            coords: x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        RingElement { coords: x.coords.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, x: &RingElement, c: &BigInt) -> RingElement {
        RingElement { coords: x.coords.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        debug_assert!(x.coords.len() == self.degree && y.coords.len() == self.degree);
        let d = self.degree;
        let mut out = vec![BigInt::zero(); d];
        for i in 0..d {
            if x.coords[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y.coords[j].is_zero() {
                    continue;
                }
                let c = &x.coords[i] * &y.coords[j];
                for k in 0..d {
                    let g = self.gamma_at(i, j, k);
                    if !g.is_zero() {
                        out[k] += &c * g;
                    }
                }
            }
        }
        RingElement { coords: out }
    }

    /// Checked multiplication; errors on a coordinate-length mismatch.
    pub fn mul_checked(&self, x: &RingElement, y: &RingElement) -> Result<RingElement> {
        self.check_degree(x)?;
        self.check_degree(y)?;
        Ok(self.mul(x, y))
    }

    /// Representation matrix of multiplication by `x`: row `i` holds the
    /// coordinates of `w_i * x`, so `coords(y * x) = coords(y) * M_x`.
    pub fn rep_matrix(&self, x: &RingElement) -> IntMat {
        let d = self.degree;
        let mut rows = Vec::with_capacity(d);
        for i in 0..d {
            rows.push(self.mul(&self.basis_element(i), x).coords);
        }
        IntMat::from_rows(rows)
    }

    /// Field norm: determinant of the representation matrix.
    pub fn norm(&self, x: &RingElement) -> BigInt {
        intmat::det(&self.rep_matrix(x))
    }

    /// Adjugate element: `adj(x) * x = norm(x)` in the ring.
    pub fn adjugate_element(&self, x: &RingElement) -> RingElement {
        let adj = intmat::adjugate(&self.rep_matrix(x));
        RingElement { coords: adj.row_vec(0) }
    }
}

fn is_squarefree(d: i64) -> bool {
    let mut n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// An element of the fraction field with rational-integer denominator,
/// kept reduced: `gcd(den, content(num)) = 1` and `den > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    num: RingElement,
    den: BigInt,
}

impl FieldElement {
    pub fn new(num: RingElement, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut f = FieldElement { num, den };
        f.reduce();
        Ok(f)
    }

    pub fn from_elem(num: RingElement) -> Self {
        FieldElement { num, den: BigInt::one() }
    }

    pub fn num(&self) -> &RingElement {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The integral element, if the denominator is 1.
    pub fn as_integral(&self) -> Option<&RingElement> {
        self.is_integral().then_some(&self.num)
    }

    fn reduce(&mut self) {
        if self.den.is_negative() {
            self.den = -self.den.clone();
            self.num = RingElement { coords: self.num.coords.iter().map(|x| -x).collect() };
        }
        let mut g = self.den.clone();
        for c in &self.num.coords {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if !g.is_one() && !g.is_zero() {
            self.num = RingElement { coords: self.num.coords.iter().map(|x| x / &g).collect() };
            self.den /= &g;
        }
        if self.num.is_zero() {
            self.den = BigInt::one();
        }
    }

    pub fn add(&self, ring: &NumberRing, other: &FieldElement) -> FieldElement {
        let num = ring.add(
            &ring.scale(&self.num, &other.den),
            &ring.scale(&other.num, &self.den),
        );
        FieldElement::new(num, &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn sub(&self, ring: &NumberRing, other: &FieldElement) -> FieldElement {
        let num = ring.sub(
            &ring.scale(&self.num, &other.den),
            &ring.scale(&other.num, &self.den),
        );
        FieldElement::new(num, &self.den * &other.den).expect("nonzero denominator")
    }

    pub fn mul(&self, ring: &NumberRing, other: &FieldElement) -> FieldElement {
        FieldElement::new(ring.mul(&self.num, &other.num), &self.den * &other.den)
            .expect("nonzero denominator")
    }

    pub fn mul_elem(&self, ring: &NumberRing, other: &RingElement) -> FieldElement {
        FieldElement::new(ring.mul(&self.num, other), self.den.clone())
            .expect("nonzero denominator")
    }

    /// Division by a nonzero integral element: multiplies by the adjugate and
    /// divides by the norm, keeping the denominator a rational integer.
    pub fn div_elem(&self, ring: &NumberRing, c: &RingElement) -> Result<FieldElement> {
        let n = ring.norm(c);
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let adj = ring.adjugate_element(c);
        FieldElement::new(ring.mul(&self.num, &adj), &self.den * n)
    }

    /// Multiplicative inverse: `den * adj(num) / norm(num)`.
    pub fn invert(&self, ring: &NumberRing) -> Result<FieldElement> {
        let n = ring.norm(&self.num);
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let adj = ring.adjugate_element(&self.num);
        FieldElement::new(ring.scale(&adj, &self.den), n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn presets_validate() {
        NumberRing::integers().validate().unwrap();
        NumberRing::quadratic(10).unwrap();
        NumberRing::quadratic(-5).unwrap();
        NumberRing::quadratic(5).unwrap();
        NumberRing::gaussian();
        assert!(NumberRing::quadratic(12).is_err()); // not squarefree
        assert!(NumberRing::quadratic(1).is_err());
    }

    #[test]
    fn broken_table_rejected() {
        // Tampered commutativity: w1*w2 = w2 but w2*w1 would need the same
        // row; here w2*w2 mixes in a non-symmetric block.
        let zero = BigInt::zero();
        let one = BigInt::one();
        let gamma = vec![
            vec![vec![one.clone(), zero.clone()], vec![zero.clone(), one.clone()]],
            vec![vec![zero.clone(), BigInt::from(2)], vec![one.clone(), zero.clone()]],
        ];
        assert!(NumberRing::from_structure_constants(gamma, vec![]).is_err());
    }

    #[test]
    fn sqrt10_squares_to_ten() {
        let r = NumberRing::quadratic(10).unwrap();
        let w = r.basis_element(1);
        assert_eq!(r.mul(&w, &w), RingElement::from_i64(&[10, 0]));
        let x = RingElement::from_i64(&[3, -2]);
        assert_eq!(r.mul(&x, &r.one()), x);
    }

    #[test]
    fn gaussian_norm_of_two_plus_i() {
        let r = NumberRing::gaussian();
        let x = RingElement::from_i64(&[2, 1]);
        let y = RingElement::from_i64(&[2, -1]);
        assert_eq!(r.mul(&x, &y), RingElement::from_i64(&[5, 0]));
        assert_eq!(r.norm(&x), bi(5));
    }

    #[test]
    fn rep_matrix_examples() {
        let r = NumberRing::quadratic(10).unwrap();
        let m = r.rep_matrix(&r.basis_element(1));
        assert_eq!(m.row_vec(0), vec![bi(0), bi(1)]);
        assert_eq!(m.row_vec(1), vec![bi(10), bi(0)]);
        assert_eq!(r.rep_matrix(&r.one()), IntMat::identity(2));
        assert_eq!(r.rep_matrix(&r.from_integer(&bi(2))), IntMat::scalar(2, &bi(2)));
        assert_eq!(r.norm(&r.basis_element(1)), bi(-10));
        assert_eq!(r.norm(&r.one()), bi(1));
    }

    fn random_elem(r: &NumberRing, rng: &mut impl Rng) -> RingElement {
        RingElement {
            coords: (0..r.degree()).map(|_| bi(rng.gen_range(-30..30))).collect(),
        }
    }

    #[test]
    fn algebra_laws_on_random_elements() {
        let mut rng = crate::rng::from_seed(7);
        for ring in [
            NumberRing::quadratic(10).unwrap(),
            NumberRing::gaussian(),
            NumberRing::quadratic(5).unwrap(),
        ] {
            for _ in 0..50 {
                let x = random_elem(&ring, &mut rng);
                let y = random_elem(&ring, &mut rng);
                let z = random_elem(&ring, &mut rng);
                assert_eq!(ring.mul(&x, &y), ring.mul(&y, &x));
                assert_eq!(
                    ring.mul(&ring.mul(&x, &y), &z),
                    ring.mul(&x, &ring.mul(&y, &z))
                );
                // rep_matrix is a ring homomorphism.
                let mx = ring.rep_matrix(&x);
                let my = ring.rep_matrix(&y);
                assert_eq!(ring.rep_matrix(&ring.mul(&x, &y)), mx.mul(&my));
                // norm is multiplicative.
                assert_eq!(
                    ring.norm(&ring.mul(&x, &y)),
                    ring.norm(&x) * ring.norm(&y)
                );
            }
        }
    }

    #[test]
    fn adjugate_element_times_element_is_norm() {
        let r = NumberRing::quadratic(10).unwrap();
        let x = RingElement::from_i64(&[3, 1]);
        let adj = r.adjugate_element(&x);
        assert_eq!(r.mul(&adj, &x), r.from_integer(&r.norm(&x)));
    }

    #[test]
    fn mul_checked_rejects_wrong_degree() {
        let r = NumberRing::quadratic(10).unwrap();
        let bad = RingElement::from_i64(&[1]);
        assert!(r.mul_checked(&r.one(), &bad).is_err());
    }

    #[test]
    fn field_elements_reduce() {
        let r = NumberRing::quadratic(10).unwrap();
        let f = FieldElement::new(RingElement::from_i64(&[2, 4]), bi(6)).unwrap();
        assert_eq!(f.num(), &RingElement::from_i64(&[1, 2]));
        assert_eq!(f.den(), &bi(3));
        let g = f.div_elem(&r, &RingElement::from_i64(&[0, 1])).unwrap();
        // ((1 + 2*sqrt10)/3) / sqrt10 = (20 + sqrt10)/30
        assert_eq!(g.num(), &RingElement::from_i64(&[20, 1]));
        assert_eq!(g.den(), &bi(30));
        // Multiplying back recovers f.
        let h = g.mul_elem(&r, &RingElement::from_i64(&[0, 1]));
        assert_eq!(h, f);
    }
}
