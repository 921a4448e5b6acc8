//! The ring `Z/NZ` with deterministic basic operations (B1)-(B5).
//!
//! `Z/NZ` is Euclidean with phi(a) = gcd(a, N) (and phi(0) = N); since the
//! gcd is computable here, none of the operations need randomization. This is
//! both the `d = 1` base case and the coefficient ring for all modular linear
//! algebra. Elements are canonical representatives in `[0, N)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Result of an extended gcd: `g = s*a + t*b`, `u*a + v*b = 0` and
/// `s*v - u*t = 1`, i.e. `(a b) * [[s, u], [t, v]] = (g 0)` with the
/// transformation matrix unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XgcdTuple<T> {
    pub g: T,
    pub s: T,
    pub t: T,
    pub u: T,
    pub v: T,
}

/// Extended gcd over `Z` with the full unimodular certificate.
/// For `a = b = 0` returns `(0, 1, 0, 0, 1)` by convention.
pub fn int_xgcd(a: &BigInt, b: &BigInt) -> XgcdTuple<BigInt> {
    if a.is_zero() && b.is_zero() {
        return XgcdTuple {
            g: BigInt::zero(),
            s: BigInt::one(),
            t: BigInt::zero(),
            u: BigInt::zero(),
            v: BigInt::one(),
        };
    }
    let e = a.extended_gcd(b);
    let (g, s, t) = (e.gcd, e.x, e.y);
    let u = -(b / &g);
    let v = a / &g;
    XgcdTuple { g, s, t, u, v }
}

/// Largest divisor of `n` coprime to `c` (for `n >= 1`).
pub(crate) fn coprime_part(n: &BigInt, c: &BigInt) -> BigInt {
    let mut m = n.clone();
    let mut g = m.gcd(c);
    while !g.is_one() {
        m /= &g;
        g = m.gcd(c);
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueRingZ {
    modulus: BigInt,
}

impl ResidueRingZ {
    pub fn new(n: BigInt) -> Result<Self> {
        if n < BigInt::one() {
            return Err(Error::InvalidModulus("modulus must be >= 1".into()));
        }
        Ok(ResidueRingZ { modulus: n })
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn project(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.modulus)
    }

    pub fn zero(&self) -> BigInt {
        BigInt::zero()
    }

    pub fn one(&self) -> BigInt {
        self.project(&BigInt::one())
    }

    pub fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a + b).mod_floor(&self.modulus)
    }

    pub fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a - b).mod_floor(&self.modulus)
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).mod_floor(&self.modulus)
    }

    pub fn neg(&self, a: &BigInt) -> BigInt {
        (-a).mod_floor(&self.modulus)
    }

    /// Euclidean function: phi(a) = gcd(a, N); in particular phi(0) = N.
    pub fn phi(&self, a: &BigInt) -> BigInt {
        a.gcd(&self.modulus)
    }

    pub fn is_unit(&self, a: &BigInt) -> bool {
        self.phi(a).is_one()
    }

    pub fn inverse(&self, a: &BigInt) -> Option<BigInt> {
        let e = a.extended_gcd(&self.modulus);
        if e.gcd.is_one() {
            Some(e.x.mod_floor(&self.modulus))
        } else {
            None
        }
    }

    /// Exact division: some `c` with `b*c = a`, or `None`. The annihilator of
    /// `b` is the principal ideal generated by `N / gcd(b, N)`.
    pub fn exact_div(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        let g = self.phi(b);
        if g == self.modulus {
            // b = 0: solvable only for a = 0.
            return a.is_zero().then(|| BigInt::zero());
        }
        let (k, r) = a.div_rem(&g);
        if !r.is_zero() {
            return None;
        }
        let np = &self.modulus / &g;
        let bp = b / &g;
        let inv = bp.extended_gcd(&np).x.mod_floor(&np);
        Some((k * inv).mod_floor(&np))
    }

    /// Deterministic Euclidean division: `a = q*b + r` with `r = 0` or
    /// `phi(r) < phi(b)`. The remainder is `a rem gcd(b, N)`.
    pub fn eudiv(&self, a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let g = self.phi(b);
        let r = a.mod_floor(&g);
        let q = self
            .exact_div(&self.sub(a, &r), b)
            .expect("a - (a rem gcd(b,N)) is divisible by b");
        Ok((q, r))
    }

    /// Minimal quotient: `c` with `b*c = a` and `phi(c) = phi(a)/phi(b)`,
    /// computed deterministically via coprime-part splitting.
    pub fn min_quotient(&self, a: &BigInt, b: &BigInt) -> Option<BigInt> {
        let c0 = self.exact_div(a, b)?;
        let gb = self.phi(b);
        let np = &self.modulus / &gb; // annihilator generator of b
        let h = c0.gcd(&np); // = phi(a) / phi(b)
        debug_assert_eq!(&self.phi(a) / &gb, h);
        if self.phi(&c0) == h {
            return Some(c0);
        }
        let c1 = &c0 / &h;
        let m = &self.modulus / &h;
        let k = coprime_part(&m, &c1.mod_floor(&m));
        let c = (&c0 + k * np).mod_floor(&self.modulus);
        debug_assert_eq!(self.phi(&c), h);
        Some(c)
    }

    /// Extended gcd in `Z/NZ` with unimodular certificate; the third and
    /// fourth cofactors are built from minimal quotients, which are coprime.
    pub fn xgcd(&self, a: &BigInt, b: &BigInt) -> XgcdTuple<BigInt> {
        if a.is_zero() && b.is_zero() {
            return XgcdTuple {
                g: self.zero(),
                s: self.one(),
                t: self.zero(),
                u: self.zero(),
                v: self.one(),
            };
        }
        let g = a.gcd(b).gcd(&self.modulus);
        let e = self.min_quotient(a, &g).expect("g divides a");
        let f = self.min_quotient(b, &g).expect("g divides b");
        // Solve u*e + v*f = 1 mod N; gcd(e, f, N) = 1 by minimality.
        let ef = int_xgcd(&e, &f);
        let hinv = self
            .inverse(&self.project(&ef.g))
            .expect("minimal quotients are coprime");
        let s = self.mul(&ef.s, &hinv);
        let t = self.mul(&ef.t, &hinv);
        XgcdTuple { g: self.project(&g), s, t, u: self.neg(&f), v: e }
    }

    /// Generator of the annihilator ideal of `a`: `N / gcd(a, N)`.
    pub fn ann(&self, a: &BigInt) -> BigInt {
        self.project(&(&self.modulus / self.phi(a)))
    }

    /// Canonical associate: returns `(u, g)` with `u` a unit and
    /// `u*a = g = gcd(a, N)`.
    pub fn unit_normalize(&self, a: &BigInt) -> (BigInt, BigInt) {
        if a.is_zero() {
            return (self.one(), self.zero());
        }
        let ga = self.phi(a);
        let a1 = a / &ga;
        let np = &self.modulus / &ga;
        let u1 = a1.extended_gcd(&np).x.mod_floor(&np);
        let k = coprime_part(&self.modulus, &u1);
        let u = (u1 + k * &np).mod_floor(&self.modulus);
        debug_assert!(self.is_unit(&u));
        debug_assert_eq!(self.mul(&u, a), self.project(&ga));
        (u, self.project(&ga))
    }
}
