//! Exact integer matrices: Hermite and Smith normal forms with
//! transformations, linear solving modulo `N`, lattice intersection and CRT
//! reconstruction.
//!
//! The Hermite form used throughout the crate is row-style with the pivot of
//! each row at its *last* nonzero entry, pivot columns strictly increasing
//! top to bottom, pivots positive and entries below a pivot reduced into
//! `[0, pivot)`. For a full-rank lattice this is a lower-triangular basis.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  {:?}",
                (0..self.cols).map(|j| self[(i, j)].to_string()).collect::<Vec<_>>()
            )?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn scalar(n: usize, c: &BigInt) -> Self {
        let mut m = IntMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        IntMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|x| x.is_zero())
    }

    pub fn stack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        IntMat { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Matrix product (self · other).
    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(v: &[BigInt], m: &IntMat) -> Vec<BigInt> {
        assert_eq!(v.len(), m.rows);
        let mut out = vec![BigInt::zero(); m.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..m.cols {
                let t = vi * &m[(i, j)];
                out[j] += t;
            }
        }
        out
    }

    pub fn scale(&self, c: &BigInt) -> IntMat {
        IntMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row_b -= q * row_a
    fn row_submul(&mut self, b: usize, a: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = q * &self[(a, j)];
            self[(b, j)] -= t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let t = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = t;
        }
    }

    pub fn transpose(&self) -> IntMat {
        let mut out = IntMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }
}

/// Hermite normal form of the row span; zero rows removed.
pub fn hnf(mat: &IntMat) -> IntMat {
    let (h, _, insert) = hnf_in_place(mat.clone(), false);
    let rows = (insert..mat.rows()).map(|i| h.row_vec(i)).collect::<Vec<_>>();
    if rows.is_empty() {
        IntMat::zero(0, mat.cols())
    } else {
        IntMat::from_rows(rows)
    }
}

/// Hermite normal form with transformation: returns `(h, t, zero_rows)` with
/// `t * mat = h`, `t` unimodular, rows `0..zero_rows` of `h` zero and the
/// remaining rows the pivot rows in pivot-column order.
pub fn hnf_with_transform(mat: &IntMat) -> (IntMat, IntMat, usize) {
    let (h, t, insert) = hnf_in_place(mat.clone(), true);
    (h, t.unwrap(), insert)
}

fn hnf_in_place(mut m: IntMat, track: bool) -> (IntMat, Option<IntMat>, usize) {
    let n = m.rows();
    let c = m.cols();
    let mut t = if track { Some(IntMat::identity(n)) } else { None };
    let mut insert = n;
    for col in (0..c).rev() {
        if insert == 0 {
            break;
        }
        let mut pivot: Option<usize> = None;
        for r in (0..insert).rev() {
            if m[(r, col)].is_zero() {
                continue;
            }
            match pivot {
                None => pivot = Some(r),
                Some(p) => {
                    combine_tracked(&mut m, &mut t, p, r, col);
                }
            }
        }
        if let Some(p) = pivot {
            if m[(p, col)].is_negative() {
                m.negate_row(p);
                if let Some(tm) = t.as_mut() {
                    tm.negate_row(p);
                }
            }
            insert -= 1;
            m.swap_rows(p, insert);
            if let Some(tm) = t.as_mut() {
                tm.swap_rows(p, insert);
            }
        }
    }
    // Reduce entries below each pivot into [0, pivot), processing pivots in
    // decreasing pivot-column order so each reduction is final.
    for i in (insert..n).rev() {
        let pcol = match last_nonzero(m.row(i)) {
            Some(c) => c,
            None => continue,
        };
        for k in i + 1..n {
            let q = m[(k, pcol)].div_floor(&m[(i, pcol)]);
            if !q.is_zero() {
                m.row_submul(k, i, &q);
                if let Some(tm) = t.as_mut() {
                    tm.row_submul(k, i, &q);
                }
            }
        }
    }
    (m, t, insert)
}

fn combine_tracked(m: &mut IntMat, t: &mut Option<IntMat>, p: usize, r: usize, col: usize) {
    let a = m[(p, col)].clone();
    let b = m[(r, col)].clone();
    debug_assert!(!a.is_zero() && !b.is_zero());
    if (&b % &a).is_zero() {
        let q = &b / &a;
        m.row_submul(r, p, &q);
        if let Some(tm) = t.as_mut() {
            tm.row_submul(r, p, &q);
        }
        return;
    }
    let e = a.extended_gcd(&b);
    let (g, x, y) = (e.gcd, e.x, e.y);
    let bp = -(&b / &g);
    let ap = &a / &g;
    let apply = |mat: &mut IntMat| {
        for j in 0..mat.cols() {
            let vp = mat[(p, j)].clone();
            let vr = mat[(r, j)].clone();
            mat[(p, j)] = &x * &vp + &y * &vr;
            mat[(r, j)] = &bp * &vp + &ap * &vr;
        }
    };
    apply(m);
    if let Some(tm) = t.as_mut() {
        apply(tm);
    }
}

fn last_nonzero(row: &[BigInt]) -> Option<usize> {
    row.iter().rposition(|x| !x.is_zero())
}

/// Hermite form of `span(mat) + n * Z^c`, entries bounded by `n` throughout.
/// The result is a full-rank `c x c` lower-triangular basis. Only valid as a
/// basis of `span(mat)` itself when `n * Z^c` is already contained in the span.
pub fn hnf_modular(mat: &IntMat, n: &BigInt) -> IntMat {
    assert!(n.is_positive());
    let c = mat.cols();
    let mut active: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..mat.rows() {
        let row: Vec<BigInt> = mat.row(i).iter().map(|x| x.mod_floor(n)).collect();
        if row.iter().any(|x| !x.is_zero()) {
            active.push(row);
        }
    }
    let mut pivots: Vec<Vec<BigInt>> = Vec::with_capacity(c);
    for col in (0..c).rev() {
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut next = Vec::with_capacity(active.len());
        for row in active.into_iter() {
            if row[col].is_zero() {
                next.push(row);
                continue;
            }
            match pivot {
                None => pivot = Some(row),
                Some(ref mut p) => {
                    let leftover = combine_vec_mod(p, row, col, n);
                    if leftover.iter().any(|x| !x.is_zero()) {
                        next.push(leftover);
                    }
                }
            }
        }
        active = next;
        let prow = match pivot {
            Some(p) => {
                let (prow, leftover) = fold_modulus(p, col, n);
                if let Some(l) = leftover {
                    if l.iter().any(|x| !x.is_zero()) {
                        active.push(l);
                    }
                }
                prow
            }
            None => {
                let mut r = vec![BigInt::zero(); c];
                r[col] = n.clone();
                r
            }
        };
        pivots.push(prow);
    }
    pivots.reverse();
    let mut h = IntMat::from_rows(pivots);
    for i in (0..c).rev() {
        for k in i + 1..c {
            let q = h[(k, i)].div_floor(&h[(i, i)]);
            if !q.is_zero() {
                h.row_submul(k, i, &q);
            }
        }
    }
    h
}

/// Combine `row` into the pivot `p` at `col`, returning the leftover row with
/// a zero at `col`; all entries reduced mod `n`.
fn combine_vec_mod(p: &mut Vec<BigInt>, row: Vec<BigInt>, col: usize, n: &BigInt) -> Vec<BigInt> {
    let a = p[col].clone();
    let b = row[col].clone();
    if (&b % &a).is_zero() {
        let q = &b / &a;
        let mut leftover = row;
        for j in 0..p.len() {
            leftover[j] = (&leftover[j] - &q * &p[j]).mod_floor(n);
        }
        leftover[col] = BigInt::zero();
        return leftover;
    }
    let e = a.extended_gcd(&b);
    let (g, x, y) = (e.gcd, e.x, e.y);
    let bp = -(&b / &g);
    let ap = &a / &g;
    let mut leftover = vec![BigInt::zero(); p.len()];
    for j in 0..p.len() {
        let vp = p[j].clone();
        let vr = row[j].clone();
        p[j] = (&x * &vp + &y * &vr).mod_floor(n);
        leftover[j] = (&bp * &vp + &ap * &vr).mod_floor(n);
    }
    p[col] = g;
    leftover[col] = BigInt::zero();
    leftover
}

/// Fold the virtual modulus row `n * e_col` into the pivot: the new pivot
/// entry is gcd(pivot, n). The transformed second row of the pair,
/// `(-n/g) * p (mod n)` with a zero at `col`, must be kept; it is not in
/// the span of the new pivot row alone.
fn fold_modulus(p: Vec<BigInt>, col: usize, n: &BigInt) -> (Vec<BigInt>, Option<Vec<BigInt>>) {
    let a = p[col].clone();
    debug_assert!(a.is_positive() && &a <= n);
    let e = a.extended_gcd(n);
    let (g, x) = (e.gcd, e.x);
    let mut prow = vec![BigInt::zero(); p.len()];
    let mut leftover = vec![BigInt::zero(); p.len()];
    let nf = -(n / &g);
    for j in 0..p.len() {
        prow[j] = (&x * &p[j]).mod_floor(n);
        leftover[j] = (&nf * &p[j]).mod_floor(n);
    }
    prow[col] = g;
    leftover[col] = BigInt::zero();
    (prow, Some(leftover))
}

/// Basis of the left kernel {y : y * mat = 0}.
pub fn kernel(mat: &IntMat) -> Vec<Vec<BigInt>> {
    let (_, t, zero_rows) = hnf_with_transform(mat);
    (0..zero_rows).map(|i| t.row_vec(i)).collect()
}

/// Solve `y * mat = rhs` over the integers.
pub fn solve(mat: &IntMat, rhs: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(rhs.len(), mat.cols());
    let (h, t, zero_rows) = hnf_with_transform(mat);
    let n = mat.rows();
    let mut v = rhs.to_vec();
    let mut coeffs = vec![BigInt::zero(); n];
    for i in (zero_rows..n).rev() {
        let pcol = last_nonzero(h.row(i)).expect("pivot row");
        if v[pcol].is_zero() {
            continue;
        }
        let (q, r) = v[pcol].div_rem(&h[(i, pcol)]);
        if !r.is_zero() {
            return None;
        }
        for j in 0..h.cols() {
            let s = &q * &h[(i, j)];
            v[j] -= s;
        }
        coeffs[i] = q;
    }
    if v.iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(IntMat::vec_mul(&coeffs, &t))
}

/// Solve `x * a = b (mod n)`: returns a particular solution together with a
/// basis of the solution lattice of the homogeneous system, or `None`.
pub fn solve_mod(a: &IntMat, b: &[BigInt], n: &BigInt) -> Option<(Vec<BigInt>, IntMat)> {
    assert!(n.is_positive());
    let rows = a.rows();
    let stacked = a.stack(&IntMat::scalar(a.cols(), n));
    let kernel_basis = {
        let ker = kernel(&stacked);
        let proj: Vec<Vec<BigInt>> = ker.into_iter().map(|v| v[..rows].to_vec()).collect();
        hnf(&IntMat::from_rows_padded(proj, rows))
    };
    let y = solve(&stacked, b)?;
    let x = y[..rows].iter().map(|v| v.mod_floor(n)).collect();
    Some((x, kernel_basis))
}

impl IntMat {
    fn from_rows_padded(rows: Vec<Vec<BigInt>>, cols: usize) -> IntMat {
        if rows.is_empty() {
            IntMat::zero(0, cols)
        } else {
            IntMat::from_rows(rows)
        }
    }
}

/// Intersection of two full-rank lattices given by row bases.
pub fn lattice_intersect(a: &IntMat, b: &IntMat) -> Result<IntMat> {
    if a.cols() != b.cols() {
        return Err(Error::DimensionMismatch(format!(
            "lattice intersection: {} vs {} columns",
            a.cols(),
            b.cols()
        )));
    }
    let stacked = a.stack(&b.scale(&-BigInt::one()));
    let ker = kernel(&stacked);
    let rows: Vec<Vec<BigInt>> = ker
        .into_iter()
        .map(|v| IntMat::vec_mul(&v[..a.rows()], a))
        .collect();
    Ok(hnf(&IntMat::from_rows_padded(rows, a.cols())))
}

/// Smith normal form `u * m * v = d` of a square nonsingular matrix, with
/// positive diagonal and divisibility chain d_i | d_{i+1}.
pub struct SnfResult {
    pub u: IntMat,
    pub d: IntMat,
    pub v: IntMat,
}

pub fn snf(m: &IntMat) -> Result<SnfResult> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch("snf expects a square matrix".into()));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut u = IntMat::identity(n);
    let mut v = IntMat::identity(n);

    for t in 0..n {
        // Bring a nonzero entry to (t, t).
        if a[(t, t)].is_zero() {
            let mut found = None;
            'search: for i in t..n {
                for j in t..n {
                    if !a[(i, j)].is_zero() {
                        found = Some((i, j));
                        break 'search;
                    }
                }
            }
            let (i, j) = found.ok_or(Error::SingularMatrix)?;
            a.swap_rows(t, i);
            u.swap_rows(t, i);
            swap_cols(&mut a, t, j);
            swap_cols(&mut v, t, j);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..n {
                if !a[(i, t)].is_zero() {
                    row_eliminate(&mut a, &mut u, t, i);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if !a[(t, j)].is_zero() {
                    col_eliminate(&mut a, &mut v, t, j);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
    }
    for i in 0..n {
        if a[(i, i)].is_negative() {
            a.negate_row(i);
            u.negate_row(i);
        }
        if a[(i, i)].is_zero() {
            return Err(Error::SingularMatrix);
        }
    }
    // Enforce the divisibility chain.
    loop {
        let mut dirty = false;
        for i in 0..n - 1 {
            let di = a[(i, i)].clone();
            let dj = a[(i + 1, i + 1)].clone();
            if (&dj % &di).is_zero() {
                continue;
            }
            dirty = true;
            // Add column i+1 to column i, then re-diagonalize the 2x2 block.
            add_col(&mut a, i, i + 1);
            add_col(&mut v, i, i + 1);
            row_eliminate(&mut a, &mut u, i, i + 1);
            col_eliminate(&mut a, &mut v, i, i + 1);
            if a[(i + 1, i)].is_zero() && a[(i, i + 1)].is_zero() {
                // fine
            } else {
                // One more sweep settles the block.
                row_eliminate(&mut a, &mut u, i, i + 1);
                col_eliminate(&mut a, &mut v, i, i + 1);
            }
            if a[(i, i)].is_negative() {
                a.negate_row(i);
                u.negate_row(i);
            }
            if a[(i + 1, i + 1)].is_negative() {
                a.negate_row(i + 1);
                u.negate_row(i + 1);
            }
        }
        if !dirty {
            break;
        }
    }
    Ok(SnfResult { u, d: a, v })
}

fn swap_cols(m: &mut IntMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = x;
    }
}

fn add_col(m: &mut IntMat, to: usize, from: usize) {
    for i in 0..m.rows() {
        let x = m[(i, from)].clone();
        m[(i, to)] += x;
    }
}

/// Clear a[(r, t)] against the pivot a[(t, t)] by a unimodular row transform.
fn row_eliminate(a: &mut IntMat, u: &mut IntMat, t: usize, r: usize) {
    let p = a[(t, t)].clone();
    let q = a[(r, t)].clone();
    if q.is_zero() {
        return;
    }
    if p.is_zero() {
        a.swap_rows(t, r);
        u.swap_rows(t, r);
        return;
    }
    if (&q % &p).is_zero() {
        let f = &q / &p;
        a.row_submul(r, t, &f);
        u.row_submul(r, t, &f);
        return;
    }
    let e = p.extended_gcd(&q);
    let (g, x, y) = (e.gcd, e.x, e.y);
    let qp = -(&q / &g);
    let pp = &p / &g;
    for mat in [a, u] {
        for j in 0..mat.cols() {
            let vt = mat[(t, j)].clone();
            let vr = mat[(r, j)].clone();
            mat[(t, j)] = &x * &vt + &y * &vr;
            mat[(r, j)] = &qp * &vt + &pp * &vr;
        }
    }
}

/// Clear a[(t, c)] against the pivot a[(t, t)] by a unimodular column
/// transform, mirrored into v (v accumulates right factors).
fn col_eliminate(a: &mut IntMat, v: &mut IntMat, t: usize, c: usize) {
    let p = a[(t, t)].clone();
    let q = a[(t, c)].clone();
    if q.is_zero() {
        return;
    }
    if p.is_zero() {
        swap_cols(a, t, c);
        swap_cols(v, t, c);
        return;
    }
    if (&q % &p).is_zero() {
        let f = &q / &p;
        col_submul(a, c, t, &f);
        col_submul(v, c, t, &f);
        return;
    }
    let e = p.extended_gcd(&q);
    let (g, x, y) = (e.gcd, e.x, e.y);
    let qp = -(&q / &g);
    let pp = &p / &g;
    for mat in [a, v] {
        for i in 0..mat.rows() {
            let vt = mat[(i, t)].clone();
            let vc = mat[(i, c)].clone();
            mat[(i, t)] = &x * &vt + &y * &vc;
            mat[(i, c)] = &qp * &vt + &pp * &vc;
        }
    }
}

fn col_submul(m: &mut IntMat, c: usize, t: usize, f: &BigInt) {
    if f.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let x = f * &m[(i, t)];
        m[(i, c)] -= x;
    }
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(v: &IntMat) -> IntMat {
    let (h, t, zero_rows) = hnf_with_transform(v);
    assert_eq!(zero_rows, 0, "matrix not unimodular");
    assert_eq!(h, IntMat::identity(v.rows()), "matrix not unimodular");
    t
}

/// Fraction-free determinant (Bareiss).
pub fn det(m: &IntMat) -> BigInt {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for t in 0..n - 1 {
        if a[(t, t)].is_zero() {
            match (t + 1..n).find(|&i| !a[(i, t)].is_zero()) {
                Some(i) => {
                    a.swap_rows(t, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in t + 1..n {
            for j in t + 1..n {
                let x = &a[(i, j)] * &a[(t, t)] - &a[(i, t)] * &a[(t, j)];
                a[(i, j)] = &x / &prev;
            }
            a[(i, t)] = BigInt::zero();
        }
        prev = a[(t, t)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Adjugate matrix: m * adjugate(m) = det(m) * I.
pub fn adjugate(m: &IntMat) -> IntMat {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut adj = IntMat::zero(n, n);
    if n == 1 {
        adj[(0, 0)] = BigInt::one();
        return adj;
    }
    for i in 0..n {
        for j in 0..n {
            let minor = minor_matrix(m, j, i);
            let c = det(&minor);
            adj[(i, j)] = if (i + j) % 2 == 0 { c } else { -c };
        }
    }
    adj
}

fn minor_matrix(m: &IntMat, skip_row: usize, skip_col: usize) -> IntMat {
    let n = m.rows();
    let mut rows = Vec::with_capacity(n - 1);
    for i in 0..n {
        if i == skip_row {
            continue;
        }
        let mut row = Vec::with_capacity(n - 1);
        for j in 0..n {
            if j == skip_col {
                continue;
            }
            row.push(m[(i, j)].clone());
        }
        rows.push(row);
    }
    IntMat::from_rows(rows)
}

/// Unique `x` with `|x| <= bound` and `x = residues[i] (mod moduli[i])`,
/// using the symmetric representative.
pub fn crt_reconstruct(residues: &[BigInt], moduli: &[BigInt], bound: &BigInt) -> Result<BigInt> {
    assert_eq!(residues.len(), moduli.len());
    assert!(!moduli.is_empty());
    let mut x = residues[0].mod_floor(&moduli[0]);
    let mut m = moduli[0].clone();
    for (r, p) in residues.iter().zip(moduli.iter()).skip(1) {
        let e = m.extended_gcd(p);
        debug_assert!(e.gcd.is_one(), "moduli not pairwise coprime");
        let u = ((r - &x) * &e.x).mod_floor(p);
        x += &m * u;
        m *= p;
        x = x.mod_floor(&m);
    }
    let half = &m >> 1;
    if x > half {
        x -= &m;
    }
    if x.abs() > *bound {
        return Err(Error::BoundTooSmall);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn mat(rows: &[&[i64]]) -> IntMat {
        IntMat::from_rows(rows.iter().map(|r| r.iter().map(|&x| bi(x)).collect()).collect())
    }

    #[test]
    fn hnf_index_two_sublattice() {
        let h = hnf(&mat(&[&[2, 0], &[0, 2], &[1, 1]]));
        // Pivot-last orientation: {(2,0),(1,1)} spans {(x,y): x+y even}.
        assert_eq!(h, mat(&[&[2, 0], &[1, 1]]));
    }

    #[test]
    fn hnf_identity_and_gcd_lattice() {
        assert_eq!(hnf(&IntMat::identity(3)), IntMat::identity(3));
        assert_eq!(hnf(&mat(&[&[6, 0], &[10, 0]])), mat(&[&[2, 0]]));
    }

    #[test]
    fn hnf_is_idempotent_and_span_preserving() {
        let m = mat(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5], &[3, 5, 8]]);
        let h = hnf(&m);
        assert_eq!(hnf(&h), h);
        // Mutual membership of rows.
        for i in 0..m.rows() {
            assert!(solve(&h, m.row(i)).is_some());
        }
        for i in 0..h.rows() {
            assert!(solve(&m, h.row(i)).is_some());
        }
    }

    #[test]
    fn hnf_modular_matches_plain() {
        let m = mat(&[&[2, 1], &[0, 6]]);
        // span contains 12*Z^2 (det = 12).
        let hm = hnf_modular(&m, &bi(12));
        assert_eq!(hm, hnf(&m));
        // Lattice 6*Z^2 with modulus 6: pivot rows must stay, not collapse.
        let l = mat(&[&[6, 0], &[0, 6]]);
        assert_eq!(hnf_modular(&l, &bi(6)), l);
    }

    #[test]
    fn hnf_modular_is_canonical_on_random_lattices() {
        // Same lattice, two generating sets, entries far above the modulus:
        // the modular form must match the plain form exactly.
        use rand::Rng;
        let mut rng = crate::rng::from_seed(42);
        for _ in 0..40 {
            let dim = rng.gen_range(2..5usize);
            let rows: Vec<Vec<BigInt>> = (0..dim + 2)
                .map(|_| (0..dim).map(|_| bi(rng.gen_range(-2000..2000))).collect())
                .collect();
            let mut m = IntMat::from_rows(rows);
            let h = hnf(&m);
            if h.rows() < dim {
                continue;
            }
            let n: BigInt = (0..dim).map(|i| h[(i, i)].clone()).product();
            // The span contains det * Z^dim = n * Z^dim.
            m = m.stack(&IntMat::scalar(dim, &n));
            let plain = hnf(&m);
            assert_eq!(hnf_modular(&m, &n), plain);
            // A second generating set: random unimodular-ish recombination.
            let mut rows2: Vec<Vec<BigInt>> = (0..m.rows()).map(|i| m.row_vec(i)).collect();
            for k in 0..rows2.len() - 1 {
                let c = bi(rng.gen_range(-3..4));
                let next = rows2[k + 1].clone();
                for (a, b) in rows2[k].iter_mut().zip(next) {
                    *a += &c * b;
                }
            }
            assert_eq!(hnf_modular(&IntMat::from_rows(rows2), &n), plain);
        }
    }

    #[test]
    fn transform_really_transforms() {
        let m = mat(&[&[4, 6], &[10, 4], &[2, 2]]);
        let (h, t, _) = hnf_with_transform(&m);
        assert_eq!(t.mul(&m), h);
    }

    #[test]
    fn kernel_rows_annihilate() {
        let m = mat(&[&[2, 4], &[1, 2], &[3, 6]]);
        let ker = kernel(&m);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(IntMat::vec_mul(&v, &m).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_mod_examples() {
        // 2x = 6 mod 30: solutions {3, 18}, kernel (15).
        let a = mat(&[&[2]]);
        let (x, ker) = solve_mod(&a, &[bi(6)], &bi(30)).unwrap();
        assert!((&x[0] * bi(2) - bi(6)).mod_floor(&bi(30)).is_zero());
        assert_eq!(ker, mat(&[&[15]]));
        // identity
        let (x, ker) = solve_mod(&IntMat::identity(2), &[bi(7), bi(9)], &bi(30)).unwrap();
        assert_eq!(x, vec![bi(7), bi(9)]);
        assert_eq!(ker, mat(&[&[30, 0], &[0, 30]]));
        // 2x = 1 mod 30: no solution
        assert!(solve_mod(&a, &[bi(1)], &bi(30)).is_none());
    }

    #[test]
    fn snf_examples() {
        let r = snf(&mat(&[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(r.d, mat(&[&[1, 0], &[0, 6]]));
        assert_eq!(r.u.mul(&mat(&[&[2, 0], &[0, 3]])).mul(&r.v), r.d);

        let r = snf(&IntMat::identity(2)).unwrap();
        assert_eq!(r.d, IntMat::identity(2));

        let r = snf(&mat(&[&[2, 0], &[0, 2]])).unwrap();
        assert_eq!(r.d, mat(&[&[2, 0], &[0, 2]]));

        assert!(matches!(snf(&mat(&[&[1, 1], &[1, 1]])), Err(Error::SingularMatrix)));
    }

    #[test]
    fn snf_transform_identity_holds() {
        let m = mat(&[&[6, 4, 2], &[4, 8, 2], &[2, 2, 10]]);
        let r = snf(&m).unwrap();
        assert_eq!(r.u.mul(&m).mul(&r.v), r.d);
        assert_eq!(det(&r.u).abs(), bi(1));
        assert_eq!(det(&r.v).abs(), bi(1));
        assert_eq!(det(&r.d), det(&m).abs());
        for i in 0..2 {
            assert!((&r.d[(i + 1, i + 1)] % &r.d[(i, i)]).is_zero());
        }
    }

    #[test]
    fn lattice_intersection_of_diagonals() {
        let a = mat(&[&[2, 0], &[0, 1]]);
        let b = mat(&[&[1, 0], &[0, 3]]);
        assert_eq!(lattice_intersect(&a, &b).unwrap(), mat(&[&[2, 0], &[0, 3]]));
        let l = mat(&[&[2, 0], &[1, 3]]);
        let lh = hnf(&l);
        assert_eq!(lattice_intersect(&lh, &lh).unwrap(), lh);
        assert_eq!(lattice_intersect(&IntMat::identity(2), &lh).unwrap(), lh);
    }

    #[test]
    fn lattice_intersect_agrees_with_box_enumeration() {
        // Brute force: enumerate points of both lattices in a box.
        let a = hnf(&mat(&[&[2, 1], &[0, 3]]));
        let b = hnf(&mat(&[&[4, 0], &[1, 2]]));
        let isect = lattice_intersect(&a, &b).unwrap();
        let in_lat = |l: &IntMat, x: i64, y: i64| solve(l, &[bi(x), bi(y)]).is_some();
        for x in -20..=20 {
            for y in -20..=20 {
                let both = in_lat(&a, x, y) && in_lat(&b, x, y);
                assert_eq!(both, in_lat(&isect, x, y), "({x},{y})");
            }
        }
    }

    #[test]
    fn crt_examples() {
        let x = crt_reconstruct(&[bi(2), bi(3)], &[bi(5), bi(7)], &bi(17)).unwrap();
        assert_eq!(x, bi(17));
        let x = crt_reconstruct(&[bi(0), bi(0)], &[bi(5), bi(7)], &bi(17)).unwrap();
        assert_eq!(x, bi(0));
        let x = crt_reconstruct(&[bi(4), bi(6)], &[bi(5), bi(7)], &bi(3)).unwrap();
        assert_eq!(x, bi(-1));
        assert!(matches!(
            crt_reconstruct(&[bi(2), bi(3)], &[bi(5), bi(7)], &bi(3)),
            Err(Error::BoundTooSmall)
        ));
    }

    #[test]
    fn det_and_adjugate() {
        let m = mat(&[&[0, 1], &[10, 0]]);
        assert_eq!(det(&m), bi(-10));
        let adj = adjugate(&m);
        assert_eq!(m.mul(&adj), IntMat::scalar(2, &bi(-10)));
        let m = mat(&[&[3, 1, 2], &[1, 4, 1], &[2, 1, 5]]);
        assert_eq!(m.mul(&adjugate(&m)), IntMat::scalar(3, &det(&m)));
    }

    #[test]
    fn unimodular_inverse_roundtrip() {
        let v = mat(&[&[1, 2], &[1, 3]]);
        let vi = unimodular_inverse(&v);
        assert_eq!(v.mul(&vi), IntMat::identity(2));
    }
}
