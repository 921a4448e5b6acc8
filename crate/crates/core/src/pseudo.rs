//! Modular pseudo-HNF for modules over rings of integers.
//!
//! A pseudomatrix is a family of coefficient ideals together with a matrix
//! over the fraction field; its span is the module `sum a_i A_i`. For a
//! full-rank module `M` with `m O^m <= M <= O^m` the pipeline is: find a
//! modulus ideal from a determinantal/minor ideal, reduce into `O/m`, run
//! the strong echelon engine there (with an optional Z-split fast path that
//! routes the rational cyclic part through `Z/mZ`), and demodularize the
//! lifted echelon back to a pseudo-HNF with unit diagonal.
//!
//! Verification is by an independent lattice oracle: the span of a
//! pseudomatrix as a rank `d*m` sublattice of `Z^(d*m)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::echelon::{self, ModMatrix};
use crate::error::{Error, Result};
use crate::ideal::{idempotent_split, FracIdeal, Ideal};
use crate::intmat::{self, IntMat};
use crate::quotient::{QuotElement, QuotientRing};
use crate::residue::ResidueRingZ;
use crate::ring::{FieldElement, NumberRing, RingElement};
use crate::rng::Prng;

#[derive(Clone, Debug)]
pub struct PseudoMatrix {
    pub ideals: Vec<FracIdeal>,
    pub matrix: Vec<Vec<FieldElement>>,
}

impl PseudoMatrix {
    pub fn new(ideals: Vec<FracIdeal>, matrix: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = matrix.len();
        if n == 0 || ideals.len() != n {
            return Err(Error::DimensionMismatch(
                "pseudomatrix needs one coefficient ideal per row".into(),
            ));
        }
        let m = matrix[0].len();
        if m == 0 || matrix.iter().any(|r| r.len() != m) {
            return Err(Error::DimensionMismatch("ragged pseudomatrix".into()));
        }
        Ok(PseudoMatrix { ideals, matrix })
    }

    /// Trivial coefficient ideals `(O, ..., O)`.
    pub fn from_matrix(ring: &NumberRing, matrix: Vec<Vec<FieldElement>>) -> Result<Self> {
        let n = matrix.len();
        Self::new(vec![FracIdeal::one(ring); n], matrix)
    }

    pub fn nrows(&self) -> usize {
        self.matrix.len()
    }

    pub fn ncols(&self) -> usize {
        self.matrix[0].len()
    }
}

/// A pseudo-HNF: lower triangular with unit diagonal, integral coefficient
/// ideals all containing the modulus used to compute it.
#[derive(Clone, Debug)]
pub struct PseudoHnf {
    pub ideals: Vec<Ideal>,
    pub matrix: Vec<Vec<FieldElement>>,
}

impl PseudoHnf {
    pub fn to_pseudo_matrix(&self) -> PseudoMatrix {
        PseudoMatrix {
            ideals: self.ideals.iter().cloned().map(FracIdeal::from_integral).collect(),
            matrix: self.matrix.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.ideals.len()
    }
}

/// The span of a pseudomatrix as a full lattice in `Z^(d*m)`: each
/// coefficient-ideal basis element times the corresponding row contributes
/// one generator, flattened to `w`-coordinates per column. Errors when a
/// generator is not integral. `modulus_hint`, when given, must be an integer
/// `N` with `N * Z^(d*m)` contained in the span; it bounds entries during
/// the Hermite reduction.
pub fn span_zlattice(
    ring: &NumberRing,
    p: &PseudoMatrix,
    modulus_hint: Option<&BigInt>,
) -> Result<IntMat> {
    let d = ring.degree();
    let m = p.ncols();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(p.nrows() * d);
    for (ideal, row) in p.ideals.iter().zip(&p.matrix) {
        for k in 0..d {
            let beta = RingElement::new(ideal.num().basis().row_vec(k));
            let mut flat = Vec::with_capacity(d * m);
            for entry in row {
                let g = entry.mul_elem(ring, &beta);
                let g = FieldElement::new(g.num().clone(), g.den() * ideal.den())?;
                match g.as_integral() {
                    Some(e) => flat.extend(e.coords().iter().cloned()),
                    None => return Err(Error::SpanNotIntegral),
                }
            }
            rows.push(flat);
        }
    }
    let mat = IntMat::from_rows(rows);
    Ok(match modulus_hint {
        Some(n) => intmat::hnf_modular(&mat, &n.abs()),
        None => intmat::hnf(&mat),
    })
}

/// SHA-256 of the canonical encoding of a lattice basis, as lowercase hex.
pub fn lattice_hash(h: &IntMat) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("{}x{}", h.rows(), h.cols()).as_bytes());
    for i in 0..h.rows() {
        for v in h.row(i) {
            hasher.update(b",");
            hasher.update(v.to_string().as_bytes());
        }
    }
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

// ---------------------------------------------------------------------------
// Modulus finding
// ---------------------------------------------------------------------------

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

fn pow_mod_u64(mut b: u64, mut e: u64, n: u64) -> u64 {
    let mut acc = 1u64;
    b %= n;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_u64(acc, b, n);
        }
        b = mul_mod_u64(b, b, n);
        e >>= 1;
    }
    acc
}

/// Deterministic stream of word-size primes starting just above 2^31.
pub(crate) fn word_primes() -> impl Iterator<Item = u64> {
    (0u64..).map(|k| (1u64 << 31) + 1 + 2 * k).filter(|&n| is_prime_u64(n))
}

/// Exact determinant of a square matrix over `O` by a small-primes modular
/// algorithm: per-prime unimodular triangulation over `O/pO`, then CRT on
/// each coordinate against a crude operator-norm bound.
pub fn modular_det(ring: &NumberRing, rows: &[Vec<RingElement>], rng: &mut Prng) -> Result<RingElement> {
    let m = rows.len();
    if m == 0 {
        return Ok(ring.one());
    }
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let d = ring.degree();
    // Coordinate bound: m! * (d^2 * Gamma_max)^(m-1) * a_max^m.
    let a_max = rows
        .iter()
        .flatten()
        .flat_map(|e| e.coords())
        .map(|c| c.abs())
        .max()
        .unwrap_or_else(BigInt::one)
        .max(BigInt::one());
    let contraction = BigInt::from(d * d) * ring.max_gamma();
    let mut bound = (1..=m).map(BigInt::from).product::<BigInt>();
    bound *= num_traits::pow::pow(contraction, m.saturating_sub(1));
    bound *= num_traits::pow::pow(a_max, m);
    let two_bound = &bound * 2 + 1;

    let mut primes: Vec<BigInt> = Vec::new();
    let mut product = BigInt::one();
    let mut residues: Vec<Vec<BigInt>> = vec![Vec::new(); d];
    for p in word_primes() {
        let pb = BigInt::from(p);
        let modulus = Ideal::from_integer(ring, &pb)?;
        let qr = QuotientRing::new(ring, &modulus)?;
        let mat = ModMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|e| qr.project(e)).collect())
                .collect(),
        );
        let (tri, sign) = echelon::triangularize(&qr, &mat, rng)?;
        let mut det_p = qr.one();
        for i in 0..m {
            det_p = qr.mul(&det_p, tri.at(i, i));
        }
        if sign < 0 {
            det_p = qr.neg(&det_p);
        }
        let coords = qr.lift(&det_p).into_coords();
        for (k, c) in coords.into_iter().enumerate() {
            residues[k].push(c);
        }
        primes.push(pb);
        product = product * BigInt::from(p);
        if product > two_bound {
            break;
        }
    }
    let coords = residues
        .into_iter()
        .map(|res| intmat::crt_reconstruct(&res, &primes, &bound))
        .collect::<Result<Vec<_>>>()?;
    Ok(RingElement::new(coords))
}

/// Clear denominators: returns the integral matrix `q * A` and the common
/// denominator `q`.
fn clear_denominators(ring: &NumberRing, p: &PseudoMatrix) -> (Vec<Vec<RingElement>>, BigInt) {
    let mut q = BigInt::one();
    for row in &p.matrix {
        for e in row {
            q = q.lcm(e.den());
        }
    }
    let rows = p
        .matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| ring.scale(e.num(), &(&q / e.den())))
                .collect()
        })
        .collect();
    (rows, q)
}

/// Flatten row `i` of an integral matrix into `d` integer rows over
/// `Z^(d*m)`: the `w_k`-multiples of the row.
fn flatten_row(ring: &NumberRing, row: &[RingElement]) -> Vec<Vec<BigInt>> {
    let d = ring.degree();
    (0..d)
        .map(|k| {
            let wk = ring.basis_element(k);
            let mut flat = Vec::with_capacity(d * row.len());
            for e in row {
                flat.extend(ring.mul(&wk, e).into_coords());
            }
            flat
        })
        .collect()
}

/// Reduce a flattened row mod p and grow an F_p echelon basis; returns true
/// if the row was independent.
fn fp_grow(basis: &mut Vec<(usize, Vec<u64>)>, mut row: Vec<u64>, p: u64) -> bool {
    for (pivot, b) in basis.iter() {
        let c = row[*pivot];
        if c != 0 {
            for (r, x) in row.iter_mut().zip(b.iter()) {
                *r = (*r + (p - c) % p * x % p) % p;
            }
        }
    }
    if let Some(pivot) = row.iter().position(|&x| x != 0) {
        let inv = pow_mod_u64(row[pivot], p - 2, p);
        for x in row.iter_mut() {
            *x = mul_mod_u64(*x, inv, p);
        }
        basis.push((pivot, row));
        true
    } else {
        false
    }
}

/// Select `m` rows whose minor has nonzero determinant, using rank growth of
/// the flattened rows modulo a word prime. A full F_p rank certifies the
/// selection exactly (the flattened determinant is the norm of the minor
/// determinant up to sign); a deficient prime is simply retried.
fn select_rows(
    ring: &NumberRing,
    rows: &[Vec<RingElement>],
    m: usize,
) -> Result<Vec<usize>> {
    let d = ring.degree();
    let n = rows.len();
    if n == m {
        return Ok((0..n).collect());
    }
    for p in word_primes().take(24) {
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        let mut selected = Vec::with_capacity(m);
        for (i, row) in rows.iter().enumerate() {
            let flats = flatten_row(ring, row);
            let reduced: Vec<Vec<u64>> = flats
                .iter()
                .map(|f| {
                    f.iter()
                        .map(|x| x.mod_floor(&BigInt::from(p)).to_u64().unwrap())
                        .collect()
                })
                .collect();
            let saved = basis.clone();
            let all = reduced.into_iter().all(|r| fp_grow(&mut basis, r, p));
            if all {
                selected.push(i);
                if selected.len() == m {
                    return Ok(selected);
                }
            } else {
                basis = saved;
            }
        }
    }
    // Persistent failure: decide rank-deficiency exactly.
    let flat: Vec<Vec<BigInt>> = rows.iter().flat_map(|r| flatten_row(ring, r)).collect();
    let h = intmat::hnf(&IntMat::from_rows(flat));
    if h.rows() < d * m {
        Err(Error::RankDeficient)
    } else {
        Err(Error::SamplingBudgetExhausted)
    }
}

/// An integral ideal `m` with `m * O^m` inside the span: the determinant
/// ideal `det(A) a_1 ... a_m` in the square case, one nonzero `m x m` minor
/// ideal otherwise.
pub fn find_modulus(ring: &NumberRing, p: &PseudoMatrix, rng: &mut Prng) -> Result<Ideal> {
    let n = p.nrows();
    let m = p.ncols();
    if n < m {
        return Err(Error::RankDeficient);
    }
    let (cleared, q) = clear_denominators(ring, p);
    let selected = select_rows(ring, &cleared, m)?;
    let minor: Vec<Vec<RingElement>> =
        selected.iter().map(|&i| cleared[i].clone()).collect();
    let det = modular_det(ring, &minor, rng)?;
    if det.is_zero() {
        return Err(Error::RankDeficient);
    }
    // det(A) = det(cleared submatrix) / q^m.
    let det_field = FieldElement::new(det, num_traits::pow::pow(q, m))?;
    let mut ideal = FracIdeal::one(ring).mul_field_element(ring, &det_field)?;
    for &i in &selected {
        ideal = ideal.product(ring, &p.ideals[i]);
    }
    match ideal.as_integral() {
        Some(i) => Ok(i.clone()),
        None => Err(Error::SpanNotIntegral),
    }
}

// ---------------------------------------------------------------------------
// Reduction and demodularization
// ---------------------------------------------------------------------------

/// Reduce a pseudomatrix modulo `m`: each coefficient ideal is scaled to an
/// integral ideal coprime to `m` by a sampled element `x` of its inverse and
/// the row is divided by `x`, keeping the span; the entries are then mapped
/// into `O/m` (denominators are invertible there whenever
/// `m O^m <= span <= O^m`). The span of the result is the image of the span
/// of `p`.
pub fn reduce_mod(
    ring: &NumberRing,
    p: &PseudoMatrix,
    qr: &QuotientRing,
    rng: &mut Prng,
) -> Result<ModMatrix<QuotElement>> {
    let m_ideal = qr.modulus();
    let mut out_rows = Vec::with_capacity(p.nrows());
    for (ideal, row) in p.ideals.iter().zip(&p.matrix) {
        let scale = coprime_scale(ring, ideal, m_ideal, rng)?;
        let inv_scale = scale.invert(ring)?;
        let mut out_row = Vec::with_capacity(row.len());
        for entry in row {
            let scaled = entry.mul(ring, &inv_scale);
            out_row.push(project_entry(ring, qr, &scaled, rng)?);
        }
        out_rows.push(out_row);
    }
    Ok(ModMatrix::from_rows(out_rows))
}

/// Image of a fraction field element in `O/m`, defined whenever the element
/// is integral at every prime of `m`. The reduced rational denominator `D`
/// may share a rational prime with `m` through a *different* prime ideal
/// above it; in that case the entry is rewritten with a denominator in `O`
/// coprime to `m`: the `m`-supported part of `(D)` is divided out by
/// iterated ideal quotients, an element `b` of the coprime part is sampled,
/// and the image is `(b * e) * b^{-1}`.
fn project_entry(
    ring: &NumberRing,
    qr: &QuotientRing,
    e: &FieldElement,
    rng: &mut Prng,
) -> Result<QuotElement> {
    if e.is_integral() {
        return Ok(qr.project(e.num()));
    }
    let one = qr.one();
    let den_bar = qr.from_integer(e.den());
    if let Some(inv) = qr.div(&one, &den_bar).quotient {
        return Ok(qr.mul(&qr.project(e.num()), &inv));
    }
    let m = qr.modulus();
    // Strip the m-supported primes from (D): each round divides by (d) + m.
    let mut d = Ideal::from_integer(ring, e.den())?;
    loop {
        let g = d.sum(ring, m);
        if g.is_one() {
            break;
        }
        d = FracIdeal::from_integral(d)
            .product(ring, &g.invert(ring)?)
            .as_integral()
            .expect("g divides d")
            .clone();
    }
    // Sample b in the coprime part with (b) + m = O.
    let mut b = None;
    for _ in 0..crate::SAMPLING_BUDGET {
        use num_bigint::RandBigInt;
        let coeffs: Vec<BigInt> = (0..ring.degree())
            .map(|_| rng.gen_bigint_range(&BigInt::zero(), qr.size()))
            .collect();
        let cand = RingElement::new(IntMat::vec_mul(&coeffs, d.basis()));
        if cand.is_zero() {
            continue;
        }
        if Ideal::principal(ring, &cand)?.sum(ring, m).is_one() {
            b = Some(cand);
            break;
        }
    }
    let b = b.ok_or(Error::SamplingBudgetExhausted)?;
    let be = e.mul_elem(ring, &b);
    let be = be.as_integral().ok_or_else(|| {
        Error::InvalidModulus(
            "entry is not integral at the modulus; the span is not between m O^m and O^m".into(),
        )
    })?;
    let b_inv = qr
        .div(&one, &qr.project(&b))
        .quotient
        .expect("b is coprime to the modulus");
    Ok(qr.mul(&qr.project(be), &b_inv))
}

/// An element `x` of `a^{-1}` with `x a` integral and coprime to `m`;
/// rejection sampling over a growing coordinate box.
fn coprime_scale(
    ring: &NumberRing,
    a: &FracIdeal,
    m: &Ideal,
    rng: &mut Prng,
) -> Result<FieldElement> {
    if a.is_integral() && a.num().is_one() {
        return Ok(FieldElement::from_elem(ring.one()));
    }
    let inv = a.invert(ring)?;
    let d = ring.degree();
    let mut box_size: i64 = 3;
    for attempt in 0..crate::SAMPLING_BUDGET {
        if attempt > 0 && attempt % 16 == 0 && box_size < (1 << 30) {
            box_size *= 2;
        }
        let coeffs: Vec<BigInt> = (0..d)
            .map(|_| {
                use num_bigint::RandBigInt;
                rng.gen_bigint_range(&BigInt::from(-box_size), &BigInt::from(box_size + 1))
            })
            .collect();
        let num = RingElement::new(IntMat::vec_mul(&coeffs, inv.num().basis()));
        if num.is_zero() {
            continue;
        }
        let x = FieldElement::new(num, inv.den().clone())?;
        let scaled = a.mul_field_element(ring, &x)?;
        let b = match scaled.as_integral() {
            Some(b) => b.clone(),
            None => continue,
        };
        if b.sum(ring, m).is_one() {
            return Ok(x);
        }
    }
    Err(Error::SamplingBudgetExhausted)
}

/// Demodularization: given `C` over `O` whose image mod `m` is a strong
/// echelon form of the image of `M` (with `m O^m <= M`), produce a
/// pseudo-HNF of `M`. Row `i` gets coefficient ideal `g = (c_ii) + m` and
/// matrix row `x C_i / c_ii` with a 1 on the diagonal, where `1 = x + y`
/// splits over `(c_ii) g^{-1}` and `m g^{-1}`.
pub fn demodularize(
    ring: &NumberRing,
    c: &[Vec<RingElement>],
    m: &Ideal,
) -> Result<PseudoHnf> {
    let size = c.len();
    if c.iter().any(|r| r.len() != size) {
        return Err(Error::DimensionMismatch("demodularization expects a square matrix".into()));
    }
    let one_field = FieldElement::from_elem(ring.one());
    let zero_field = FieldElement::from_elem(ring.zero());
    let mut ideals = vec![Ideal::one(ring); size];
    let mut matrix = vec![vec![zero_field.clone(); size]; size];
    for i in (0..size).rev() {
        let cii = &c[i][i];
        if cii.is_zero() {
            // Zero pivot: the row contributes m * e_i.
            ideals[i] = m.clone();
            matrix[i][i] = one_field.clone();
            continue;
        }
        let principal = Ideal::principal(ring, cii)?;
        let g = principal.sum(ring, m);
        let x = if principal.contains_ideal(m) {
            // g = (c_ii): x = 1, y = 0 keeps the row exactly C_i / c_ii.
            ring.one()
        } else {
            // m g^{-1} = m (c_ii)^{-1} n O and (c_ii) g^{-1} = (c_ii) m^{-1} n O:
            // both products involve a principal ideal, so stay cubic in d.
            let c_inv = principal.invert(ring)?;
            let i2 = FracIdeal::from_integral(m.clone())
                .product(ring, &c_inv)
                .intersect_ring(ring)?;
            let i1 = m
                .invert(ring)?
                .mul_field_element(ring, &FieldElement::from_elem(cii.clone()))?
                .intersect_ring(ring)?;
            let (x, _y) = idempotent_split(ring, &i1, &i2)?;
            x
        };
        for j in 0..i {
            let scaled = ring.mul(&x, &c[i][j]);
            matrix[i][j] = FieldElement::from_elem(scaled).div_elem(ring, cii)?;
        }
        matrix[i][i] = one_field.clone();
        ideals[i] = g;
    }
    Ok(PseudoHnf { ideals, matrix })
}

// ---------------------------------------------------------------------------
// Z-split
// ---------------------------------------------------------------------------

/// Z-split of a modulus: coprime integral ideals `a`, `b` with `a b = m` and
/// `O/a` cyclic as a Z-module, `O/a = Z/(m_z)`, where `m_z = norm(a) =
/// minimum(a)`. Entirely gcd-based; no factorization.
pub fn zsplit(ring: &NumberRing, m: &Ideal) -> Result<(Ideal, Ideal, BigInt)> {
    let norm = m.norm().clone();
    let mut mz = m.minimum().clone();
    let mut b = &norm / &mz;
    loop {
        let g = mz.gcd(&b);
        if g.is_one() {
            break;
        }
        mz /= &g;
        if mz.is_one() {
            break;
        }
        b = (&b * &b).mod_floor(&mz);
    }
    let a = if mz.is_one() {
        Ideal::one(ring)
    } else {
        Ideal::from_integer(ring, &mz)?.sum(ring, m)
    };
    let cob = &norm / &mz;
    let b_ideal = if cob.is_one() {
        Ideal::one(ring)
    } else {
        Ideal::from_integer(ring, &cob)?.sum(ring, m)
    };
    Ok((a, b_ideal, mz))
}

/// Coordinates of the ring homomorphism `O -> Z/m_z Z` induced by a modulus
/// with cyclic quotient generated by 1: `sum x_i w_i` maps to
/// `sum x_i coeffs[i]`. Verified multiplicative on basis pairs.
pub fn rational_quotient_map(ring: &NumberRing, a: &Ideal, m_z: &BigInt) -> Result<Vec<BigInt>> {
    let d = ring.degree();
    if m_z.is_one() {
        return Ok(vec![BigInt::zero(); d]);
    }
    let qr = QuotientRing::new(ring, a)?;
    let nontrivial: Vec<usize> = (0..d).filter(|&i| !qr.invariants()[i].is_one()).collect();
    if nontrivial.len() != 1 || &qr.invariants()[nontrivial[0]] != m_z {
        return Err(Error::NonCyclicQuotient);
    }
    let slot = nontrivial[0];
    let u = qr.one().coords()[slot].clone();
    let e = u.extended_gcd(m_z);
    if !e.gcd.is_one() {
        return Err(Error::NonCyclicQuotient);
    }
    let u_inv = e.x.mod_floor(m_z);
    let coeffs: Vec<BigInt> = (0..d)
        .map(|i| {
            let c = qr.project(&ring.basis_element(i)).coords()[slot].clone();
            (c * &u_inv).mod_floor(m_z)
        })
        .collect();
    // Multiplicativity check on basis pairs.
    for i in 0..d {
        for j in 0..d {
            let prod = ring.mul(&ring.basis_element(i), &ring.basis_element(j));
            let mapped: BigInt = prod
                .coords()
                .iter()
                .zip(&coeffs)
                .map(|(x, c)| x * c)
                .sum();
            let expect = (&coeffs[i] * &coeffs[j]).mod_floor(m_z);
            if mapped.mod_floor(m_z) != expect {
                return Err(Error::NonCyclicQuotient);
            }
        }
    }
    Ok(coeffs)
}

// ---------------------------------------------------------------------------
// The pipeline
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct PseudoHnfOptions {
    /// Use this modulus instead of computing a determinantal one.
    pub modulus: Option<Ideal>,
    /// Route the rational cyclic part of the quotient through `Z/mZ`.
    pub use_zsplit: bool,
}

impl Default for PseudoHnfOptions {
    fn default() -> Self {
        PseudoHnfOptions { modulus: None, use_zsplit: true }
    }
}

#[derive(Clone, Debug)]
pub struct SplitInfo {
    pub a: Ideal,
    pub b: Ideal,
    pub m_z: BigInt,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub modulus: Ideal,
    pub split: Option<SplitInfo>,
    pub span_hash: String,
}

#[derive(Clone, Debug)]
pub struct PseudoHnfResult {
    pub hnf: PseudoHnf,
    pub certificate: Certificate,
}

pub fn pseudo_hnf(
    ring: &NumberRing,
    p: &PseudoMatrix,
    options: &PseudoHnfOptions,
    rng: &mut Prng,
) -> Result<PseudoHnfResult> {
    let m = p.ncols();
    if p.nrows() < m {
        return Err(Error::RankDeficient);
    }
    let modulus = match &options.modulus {
        Some(m) => m.clone(),
        None => find_modulus(ring, p, rng)?,
    };
    let qr = QuotientRing::new(ring, &modulus)?;
    let reduced = reduce_mod(ring, p, &qr, rng)?;

    let mut split_info = None;
    let echelon_form = if !options.use_zsplit {
        echelon::strong_echelon(&qr, &reduced, rng)?
    } else {
        let (a, b, m_z) = zsplit(ring, &modulus)?;
        split_info = Some(SplitInfo { a: a.clone(), b: b.clone(), m_z: m_z.clone() });
        if a.is_one() {
            echelon::strong_echelon(&qr, &reduced, rng)?
        } else if b.is_one() {
            // Fully cyclic: compute over Z/m_z Z and lift through k -> k*1.
            let zmat = project_rational(ring, &qr, &reduced, &a, &m_z)?;
            let rz = ResidueRingZ::new(m_z.clone())?;
            let hz = echelon::strong_echelon(&rz, &zmat, rng)?;
            hz.map(|k| qr.from_integer(k))
        } else {
            let a_gen = qr.gen(&a, rng)?;
            let b_gen = qr.gen(&b, rng)?;
            let (e, f) = qr.bezout_coprime(&a_gen, &b_gen)?;
            // Z/m_z side.
            let zmat = project_rational(ring, &qr, &reduced, &a, &m_z)?;
            let rz = ResidueRingZ::new(m_z.clone())?;
            let hz = echelon::strong_echelon(&rz, &zmat, rng)?;
            let a_side = hz.map(|k| qr.from_integer(k));
            // O/b side.
            let qb = QuotientRing::new(ring, &b)?;
            let bmat = reduced.map(|x| qb.project(&qr.lift(x)));
            let hb = echelon::strong_echelon(&qb, &bmat, rng)?;
            let b_side = hb.map(|y| qr.project(&qb.lift(y)));
            // Adjust diagonals to divide the split generators, recombine
            // with the idempotents.
            let a_form = echelon::diagonal_adjust(&qr, &a_side, &a_gen, &b_gen);
            let b_form = echelon::diagonal_adjust(&qr, &b_side, &b_gen, &a_gen);
            let ea = qr.mul(&e, &a_gen);
            let fb = qr.mul(&f, &b_gen);
            echelon::crt_combine(&qr, &a_form, &b_form, &ea, &fb)
        }
    };
    let canonical = echelon::howell_normalize(&qr, &echelon_form)?;
    let lifted: Vec<Vec<RingElement>> = (0..canonical.rows())
        .map(|i| canonical.row(i).iter().map(|x| qr.lift(x)).collect())
        .collect();
    let hnf = demodularize(ring, &lifted, &modulus)?;
    let span_hash = lattice_hash(&span_zlattice(
        ring,
        &hnf.to_pseudo_matrix(),
        Some(modulus.norm()),
    )?);
    Ok(PseudoHnfResult {
        hnf,
        certificate: Certificate { modulus, split: split_info, span_hash },
    })
}

/// Map a matrix over `O/m` through the rational quotient of the split part
/// `a`: entry `x` goes to the image of its lift under `O -> Z/m_z Z`.
fn project_rational(
    ring: &NumberRing,
    qr: &QuotientRing,
    mat: &ModMatrix<QuotElement>,
    a: &Ideal,
    m_z: &BigInt,
) -> Result<ModMatrix<BigInt>> {
    let coeffs = rational_quotient_map(ring, a, m_z)?;
    Ok(mat.map(|x| {
        let lifted = qr.lift(x);
        lifted
            .coords()
            .iter()
            .zip(&coeffs)
            .map(|(c, k)| c * k)
            .sum::<BigInt>()
            .mod_floor(m_z)
    }))
}

/// Span-equality oracle: compares the `Z^(d*m)` lattices of two
/// pseudomatrices. With `exact`, the comparison uses plain Hermite forms;
/// otherwise `hint` must be contained in both spans as `hint * Z^(d*m)`.
pub fn spans_equal(
    ring: &NumberRing,
    p: &PseudoMatrix,
    q: &PseudoMatrix,
    hint: Option<&BigInt>,
) -> Result<bool> {
    let hp = span_zlattice(ring, p, hint)?;
    let hq = span_zlattice(ring, q, hint)?;
    Ok(hp == hq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn elem(c: &[i64]) -> RingElement {
        RingElement::from_i64(c)
    }

    fn fe(c: &[i64]) -> FieldElement {
        FieldElement::from_elem(elem(c))
    }

    fn zsqrt10() -> NumberRing {
        NumberRing::quadratic(10).unwrap()
    }

    fn p2(ring: &NumberRing) -> Ideal {
        Ideal::from_generators(ring, &[elem(&[2, 0]), elem(&[0, 1])]).unwrap()
    }

    #[test]
    fn span_zlattice_examples() {
        let r = zsqrt10();
        // ((O), [1]) -> all of Z^2.
        let p = PseudoMatrix::from_matrix(&r, vec![vec![fe(&[1, 0])]]).unwrap();
        assert_eq!(span_zlattice(&r, &p, None).unwrap(), IntMat::identity(2));
        // ((p2), [1]) -> index-2 sublattice.
        let p = PseudoMatrix::new(
            vec![FracIdeal::from_integral(p2(&r))],
            vec![vec![fe(&[1, 0])]],
        )
        .unwrap();
        let h = span_zlattice(&r, &p, None).unwrap();
        assert_eq!(h, *p2(&r).basis());
        // Non-integral span errors.
        let p = PseudoMatrix::from_matrix(
            &r,
            vec![vec![FieldElement::new(elem(&[1, 0]), bi(2)).unwrap()]],
        )
        .unwrap();
        assert!(matches!(span_zlattice(&r, &p, None), Err(Error::SpanNotIntegral)));
    }

    #[test]
    fn find_modulus_examples() {
        let mut rng = from_seed(30);
        // d = 1, diag(2, 3) -> (6).
        let z = NumberRing::integers();
        let p = PseudoMatrix::from_matrix(
            &z,
            vec![vec![fe(&[2]), fe(&[0])], vec![fe(&[0]), fe(&[3])]],
        )
        .unwrap();
        let m = find_modulus(&z, &p, &mut rng).unwrap();
        assert_eq!(m.norm(), &bi(6));
        // Z[sqrt10], ((O), [sqrt10]) -> (sqrt10), norm 10.
        let r = zsqrt10();
        let p = PseudoMatrix::from_matrix(&r, vec![vec![fe(&[0, 1])]]).unwrap();
        let m = find_modulus(&r, &p, &mut rng).unwrap();
        assert_eq!(m.norm(), &bi(10));
        assert_eq!(&m, &Ideal::principal(&r, &elem(&[0, 1])).unwrap());
        // [[1, sqrt10], [sqrt10, 1]] -> (1 - 10) = (9), norm 81.
        let p = PseudoMatrix::from_matrix(
            &r,
            vec![
                vec![fe(&[1, 0]), fe(&[0, 1])],
                vec![fe(&[0, 1]), fe(&[1, 0])],
            ],
        )
        .unwrap();
        let m = find_modulus(&r, &p, &mut rng).unwrap();
        assert_eq!(&m, &Ideal::from_integer(&r, &bi(9)).unwrap());
        // Rank-deficient square input.
        let p = PseudoMatrix::from_matrix(
            &z,
            vec![vec![fe(&[1]), fe(&[1])], vec![fe(&[2]), fe(&[2])]],
        )
        .unwrap();
        assert!(matches!(find_modulus(&z, &p, &mut rng), Err(Error::RankDeficient)));
    }

    #[test]
    fn find_modulus_nonsquare_uses_a_minor() {
        let mut rng = from_seed(31);
        let r = zsqrt10();
        // 3 rows spanning a rank-2 module; any full-rank pair gives a valid
        // modulus (m O^2 inside the span).
        let p = PseudoMatrix::from_matrix(
            &r,
            vec![
                vec![fe(&[2, 0]), fe(&[0, 0])],
                vec![fe(&[1, 1]), fe(&[3, 0])],
                vec![fe(&[0, 1]), fe(&[1, 0])],
            ],
        )
        .unwrap();
        let m = find_modulus(&r, &p, &mut rng).unwrap();
        let span = span_zlattice(&r, &p, None).unwrap();
        // m * e_j must be inside the span for all unit vectors.
        let d = 2;
        for j in 0..2 {
            for k in 0..d {
                let beta = RingElement::new(m.basis().row_vec(k));
                let mut flat = vec![bi(0); d * 2];
                for (t, c) in beta.coords().iter().enumerate() {
                    flat[j * d + t] = c.clone();
                }
                assert!(crate::intmat::solve(&span, &flat).is_some());
            }
        }
    }

    #[test]
    fn modular_det_examples() {
        let mut rng = from_seed(32);
        let r = zsqrt10();
        let rows = vec![
            vec![elem(&[1, 0]), elem(&[0, 1])],
            vec![elem(&[0, 1]), elem(&[1, 0])],
        ];
        assert_eq!(modular_det(&r, &rows, &mut rng).unwrap(), elem(&[-9, 0]));
        let id = vec![
            vec![elem(&[1, 0]), elem(&[0, 0])],
            vec![elem(&[0, 0]), elem(&[1, 0])],
        ];
        assert_eq!(modular_det(&r, &id, &mut rng).unwrap(), elem(&[1, 0]));
        let z = NumberRing::integers();
        assert_eq!(modular_det(&z, &[vec![elem(&[6])]], &mut rng).unwrap(), elem(&[6]));
    }

    /// Cofactor expansion as an independent determinant oracle.
    fn det_cofactor(ring: &NumberRing, rows: &[Vec<RingElement>]) -> RingElement {
        let n = rows.len();
        if n == 1 {
            return rows[0][0].clone();
        }
        let mut acc = ring.zero();
        for j in 0..n {
            if rows[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<RingElement>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(k, _)| *k != j)
                        .map(|(_, e)| e.clone())
                        .collect()
                })
                .collect();
            let sub = det_cofactor(ring, &minor);
            let term = ring.mul(&rows[0][j], &sub);
            acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
        }
        acc
    }

    #[test]
    fn modular_det_matches_cofactor_on_random_matrices() {
        let mut rng = from_seed(33);
        use rand::Rng;
        for ring in [zsqrt10(), NumberRing::gaussian(), NumberRing::quadratic(5).unwrap()] {
            for _ in 0..5 {
                let rows: Vec<Vec<RingElement>> = (0..4)
                    .map(|_| {
                        (0..4)
                            .map(|_| {
                                RingElement::new(
                                    (0..ring.degree())
                                        .map(|_| bi(rng.gen_range(-50..50)))
                                        .collect(),
                                )
                            })
                            .collect()
                    })
                    .collect();
                let expect = det_cofactor(&ring, &rows);
                assert_eq!(modular_det(&ring, &rows, &mut rng).unwrap(), expect);
            }
        }
    }

    #[test]
    fn reduce_mod_examples() {
        let mut rng = from_seed(34);
        let r = zsqrt10();
        // ((O), I) mod anything -> identity.
        let p = PseudoMatrix::from_matrix(
            &r,
            vec![
                vec![fe(&[1, 0]), fe(&[0, 0])],
                vec![fe(&[0, 0]), fe(&[1, 0])],
            ],
        )
        .unwrap();
        let m = Ideal::from_integer(&r, &bi(6)).unwrap();
        let qr = QuotientRing::new(&r, &m).unwrap();
        let b = reduce_mod(&r, &p, &qr, &mut rng).unwrap();
        assert_eq!(*b.at(0, 0), qr.one());
        assert_eq!(*b.at(1, 1), qr.one());
        assert!(b.at(0, 1).is_zero() && b.at(1, 0).is_zero());

        // ((p2), [1]) mod (2): the span image is generated by sqrt10-bar.
        let p = PseudoMatrix::new(
            vec![FracIdeal::from_integral(p2(&r))],
            vec![vec![fe(&[1, 0])]],
        )
        .unwrap();
        let m2 = Ideal::from_integer(&r, &bi(2)).unwrap();
        let q2 = QuotientRing::new(&r, &m2).unwrap();
        let b = reduce_mod(&r, &p, &q2, &mut rng).unwrap();
        // The span of the single entry must be the image of p2: phi = 2.
        assert_eq!(q2.phi(b.at(0, 0)), bi(2));

        // d = 1 integral reduction.
        let z = NumberRing::integers();
        let p = PseudoMatrix::from_matrix(
            &z,
            vec![vec![fe(&[2]), fe(&[0])], vec![fe(&[1]), fe(&[3])]],
        )
        .unwrap();
        let m6 = Ideal::from_integer(&z, &bi(6)).unwrap();
        let q6 = QuotientRing::new(&z, &m6).unwrap();
        let b = reduce_mod(&z, &p, &q6, &mut rng).unwrap();
        assert_eq!(b.at(0, 0).coords()[0], bi(2));
        assert_eq!(b.at(1, 1).coords()[0], bi(3));
    }

    #[test]
    fn reduce_mod_handles_denominators_sharing_a_rational_prime() {
        // In Z[i], 5 = (2+i)(2-i). The entry 1/(2+i) = (2-i)/5 has reduced
        // rational denominator 5, which is NOT invertible modulo m = (2-i)^2
        // even though the entry is integral at m. The coefficient ideal
        // (2+i) makes the span integral.
        let mut rng = from_seed(40);
        let zi = NumberRing::gaussian();
        let p_bar = Ideal::principal(&zi, &elem(&[2, -1])).unwrap();
        let m = p_bar.product(&zi, &p_bar);
        let qr = QuotientRing::new(&zi, &m).unwrap();
        let p = PseudoMatrix::new(
            vec![FracIdeal::from_integral(Ideal::principal(&zi, &elem(&[2, 1])).unwrap())],
            vec![vec![FieldElement::new(elem(&[2, -1]), bi(5)).unwrap()]],
        )
        .unwrap();
        let reduced = reduce_mod(&zi, &p, &qr, &mut rng).unwrap();
        // The span of the reduced matrix is the image of the span of p,
        // which is (2+i)(2-i)/5 * O = O: the entry must be a unit.
        assert!(qr.phi(reduced.at(0, 0)).is_one());
        // End to end: the pipeline preserves the span for this module.
        let out = pseudo_hnf(&zi, &p, &PseudoHnfOptions::default(), &mut rng).unwrap();
        assert!(spans_equal(&zi, &p, &out.hnf.to_pseudo_matrix(), None).unwrap());
    }

    #[test]
    fn demodularize_worked_example() {
        // M = p2 inside O^1 over Z[sqrt10], modulus (2), C = [sqrt10]:
        // g = p2, row becomes [1] with coefficient ideal p2.
        let r = zsqrt10();
        let m = Ideal::from_integer(&r, &bi(2)).unwrap();
        let c = vec![vec![elem(&[0, 1])]];
        let h = demodularize(&r, &c, &m).unwrap();
        assert_eq!(h.ideals[0], p2(&r));
        assert_eq!(h.matrix[0][0], fe(&[1, 0]));

        // M = O^2, C = I.
        let c = vec![
            vec![elem(&[1, 0]), elem(&[0, 0])],
            vec![elem(&[0, 0]), elem(&[1, 0])],
        ];
        let h = demodularize(&r, &c, &m).unwrap();
        assert!(h.ideals.iter().all(|i| i.is_one()));

        // d = 1: M = 2Z inside Z^1, modulus (6), C = [2] -> ((2), [1]).
        let z = NumberRing::integers();
        let m6 = Ideal::from_integer(&z, &bi(6)).unwrap();
        let h = demodularize(&z, &[vec![elem(&[2])]], &m6).unwrap();
        assert_eq!(h.ideals[0], Ideal::from_integer(&z, &bi(2)).unwrap());
        assert_eq!(h.matrix[0][0], fe(&[1]));

        // Zero pivot row contributes m * e_i.
        let h = demodularize(&z, &[vec![z.zero()]], &m6).unwrap();
        assert_eq!(h.ideals[0], m6);
        assert_eq!(h.matrix[0][0], fe(&[1]));
    }

    #[test]
    fn zsplit_examples() {
        let r = zsqrt10();
        // Degree-one prime above 3: fully cyclic.
        let m = Ideal::from_generators(&r, &[elem(&[3, 0]), elem(&[-1, 1])]).unwrap();
        let (a, b, mz) = zsplit(&r, &m).unwrap();
        assert_eq!(a, m);
        assert_eq!(mz, bi(3));
        assert!(b.is_one());
        // Inert prime 7: no rational part.
        let m = Ideal::from_integer(&r, &bi(7)).unwrap();
        let (a, b, mz) = zsplit(&r, &m).unwrap();
        assert!(a.is_one());
        assert_eq!(mz, bi(1));
        assert_eq!(b, m);
        // p1 p2 q1 q2 with two split primes: split finds nothing.
        let p31 = Ideal::from_generators(&r, &[elem(&[3, 0]), elem(&[-1, 1])]).unwrap();
        let p32 = Ideal::from_generators(&r, &[elem(&[3, 0]), elem(&[1, 1])]).unwrap();
        let q131 = Ideal::from_generators(&r, &[elem(&[13, 0]), elem(&[-6, 1])]).unwrap();
        let q132 = Ideal::from_generators(&r, &[elem(&[13, 0]), elem(&[6, 1])]).unwrap();
        let m = p31
            .product(&r, &p32)
            .product(&r, &q131)
            .product(&r, &q132);
        assert_eq!(m.norm(), &bi(9 * 169));
        assert_eq!(m.minimum(), &bi(39));
        let (a, b, mz) = zsplit(&r, &m).unwrap();
        assert!(a.is_one());
        assert_eq!(mz, bi(1));
        assert_eq!(b, m);
        // Postconditions on a composite modulus with a genuine split.
        let m = Ideal::from_generators(&r, &[elem(&[3, 0]), elem(&[-1, 1])])
            .unwrap()
            .product(&r, &Ideal::from_integer(&r, &bi(7)).unwrap());
        let (a, b, mz) = zsplit(&r, &m).unwrap();
        assert_eq!(a.product(&r, &b), m);
        assert!(a.sum(&r, &b).is_one());
        assert_eq!(a.norm(), &mz);
        assert_eq!(a.minimum(), &mz);
    }

    #[test]
    fn rational_quotient_map_examples() {
        let r = zsqrt10();
        let a = Ideal::from_generators(&r, &[elem(&[3, 0]), elem(&[-1, 1])]).unwrap();
        let c = rational_quotient_map(&r, &a, &bi(3)).unwrap();
        // sqrt10 = 1 mod a, so the map is (1, 1).
        assert_eq!(c, vec![bi(1), bi(1)]);
        // a = O: zero map.
        let c = rational_quotient_map(&r, &Ideal::one(&r), &bi(1)).unwrap();
        assert_eq!(c, vec![bi(0), bi(0)]);
        // d = 1, a = (30).
        let z = NumberRing::integers();
        let a = Ideal::from_integer(&z, &bi(30)).unwrap();
        assert_eq!(rational_quotient_map(&z, &a, &bi(30)).unwrap(), vec![bi(1)]);
        // Non-cyclic quotient is rejected.
        let m = Ideal::from_integer(&r, &bi(3)).unwrap();
        assert!(rational_quotient_map(&r, &m, &bi(9)).is_err());
    }

    #[test]
    fn pseudo_hnf_identity_and_p2() {
        let mut rng = from_seed(35);
        let r = zsqrt10();
        let p = PseudoMatrix::from_matrix(
            &r,
            vec![
                vec![fe(&[1, 0]), fe(&[0, 0])],
                vec![fe(&[0, 0]), fe(&[1, 0])],
            ],
        )
        .unwrap();
        let out = pseudo_hnf(&r, &p, &PseudoHnfOptions::default(), &mut rng).unwrap();
        assert!(out.hnf.ideals.iter().all(|i| i.is_one()));
        assert!(spans_equal(&r, &p, &out.hnf.to_pseudo_matrix(), None).unwrap());

        // The p2 <= O^1 example: ideals block equals the (2, sqrt10) basis.
        let p = PseudoMatrix::new(
            vec![FracIdeal::from_integral(p2(&r))],
            vec![vec![fe(&[1, 0])]],
        )
        .unwrap();
        let out = pseudo_hnf(&r, &p, &PseudoHnfOptions::default(), &mut rng).unwrap();
        assert_eq!(out.hnf.ideals[0], p2(&r));
        assert_eq!(out.hnf.matrix[0][0], fe(&[1, 0]));
        assert!(spans_equal(&r, &p, &out.hnf.to_pseudo_matrix(), None).unwrap());
    }

    #[test]
    fn pseudo_hnf_output_shape() {
        let mut rng = from_seed(36);
        let r = zsqrt10();
        let p = PseudoMatrix::from_matrix(
            &r,
            vec![
                vec![fe(&[2, 1]), fe(&[0, 3])],
                vec![fe(&[1, 0]), fe(&[4, 1])],
                vec![fe(&[0, 2]), fe(&[1, 1])],
            ],
        )
        .unwrap();
        let out = pseudo_hnf(&r, &p, &PseudoHnfOptions::default(), &mut rng).unwrap();
        let h = &out.hnf;
        for i in 0..h.dim() {
            assert_eq!(h.matrix[i][i], fe(&[1, 0]));
            for j in i + 1..h.dim() {
                assert!(h.matrix[i][j].is_zero());
            }
            // coefficient ideals contain the modulus
            assert!(h.ideals[i].contains_ideal(&out.certificate.modulus));
        }
        assert!(spans_equal(&r, &p, &h.to_pseudo_matrix(), None).unwrap());
        // zsplit on/off agree.
        let off = PseudoHnfOptions { modulus: None, use_zsplit: false };
        let out2 = pseudo_hnf(&r, &p, &off, &mut rng).unwrap();
        assert!(spans_equal(
            &r,
            &out.hnf.to_pseudo_matrix(),
            &out2.hnf.to_pseudo_matrix(),
            None
        )
        .unwrap());
    }

    #[test]
    fn pseudo_hnf_matches_classical_hnf_over_z() {
        let mut rng = from_seed(37);
        let z = NumberRing::integers();
        let rows = vec![vec![fe(&[4]), fe(&[0])], vec![fe(&[1]), fe(&[3])]];
        let p = PseudoMatrix::from_matrix(&z, rows).unwrap();
        let out = pseudo_hnf(&z, &p, &PseudoHnfOptions::default(), &mut rng).unwrap();
        // Reconstruct integer rows g_i * B_i and compare with the classical
        // Hermite form.
        let expect = intmat::hnf(&IntMat::from_rows(vec![
            vec![bi(4), bi(0)],
            vec![bi(1), bi(3)],
        ]));
        for i in 0..2 {
            let g = out.hnf.ideals[i].norm();
            for j in 0..2 {
                let e = &out.hnf.matrix[i][j];
                let v = g * e.num().coords()[0].clone() / e.den();
                assert_eq!(v, expect[(i, j)], "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn rank_deficient_input_is_rejected() {
        let mut rng = from_seed(38);
        let z = NumberRing::integers();
        // Fewer rows than columns.
        let p = PseudoMatrix::from_matrix(&z, vec![vec![fe(&[1]), fe(&[2])]]).unwrap();
        assert!(matches!(
            pseudo_hnf(&z, &p, &PseudoHnfOptions::default(), &mut rng),
            Err(Error::RankDeficient)
        ));
        // Square but singular.
        let p = PseudoMatrix::from_matrix(
            &z,
            vec![vec![fe(&[1]), fe(&[2])], vec![fe(&[2]), fe(&[4])]],
        )
        .unwrap();
        assert!(matches!(
            pseudo_hnf(&z, &p, &PseudoHnfOptions::default(), &mut rng),
            Err(Error::RankDeficient)
        ));
        // Non-square rank-deficient.
        let p = PseudoMatrix::from_matrix(
            &z,
            vec![
                vec![fe(&[1]), fe(&[2])],
                vec![fe(&[2]), fe(&[4])],
                vec![fe(&[3]), fe(&[6])],
            ],
        )
        .unwrap();
        assert!(matches!(
            pseudo_hnf(&z, &p, &PseudoHnfOptions::default(), &mut rng),
            Err(Error::RankDeficient)
        ));
    }

    #[test]
    fn fractional_ideals_and_denominators_flow_through() {
        let mut rng = from_seed(39);
        let r = zsqrt10();
        // Coefficient ideal (1/2) p2 and an entry with denominator 3; span
        // is still integral because the matrix compensates.
        let half_p2 = FracIdeal::new(p2(&r), bi(2)).unwrap();
        let p = PseudoMatrix::new(
            vec![half_p2, FracIdeal::one(&r)],
            vec![
                vec![fe(&[2, 0]), fe(&[0, 2])],
                vec![FieldElement::new(elem(&[3, 0]), bi(3)).unwrap(), fe(&[5, 1])],
            ],
        )
        .unwrap();
        let out = pseudo_hnf(&r, &p, &PseudoHnfOptions::default(), &mut rng).unwrap();
        assert!(spans_equal(&r, &p, &out.hnf.to_pseudo_matrix(), None).unwrap());
    }
}
