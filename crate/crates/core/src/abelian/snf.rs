use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::{ext_gcd, gcd, Matrix};

/// Smith normal form `U·m·V = S` with the requested transforms.
#[derive(Clone, Debug)]
pub struct Snf {
    /// Diagonal of `S`, length `min(rows, cols)`, with `d1 | d2 | ...`.
    pub diag: Vec<i128>,
    pub rank: usize,
    pub u: Option<Matrix>,
    pub u_inv: Option<Matrix>,
    pub v: Option<Matrix>,
    pub v_inv: Option<Matrix>,
}

impl Snf {
    pub fn s(&self, rows: usize, cols: usize) -> Matrix {
        Matrix::diagonal(rows, cols, &self.diag)
    }
}

/// Smith normal form over arbitrary-precision integers.
#[derive(Clone, Debug)]
pub struct BigSnf {
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

/// Full Smith normal form with both transforms and their inverses.
pub fn snf(m: &Matrix) -> Snf {
    snf_with(m, true, true)
}

/// Smith normal form, tracking `U`/`U⁻¹` when `left` and `V`/`V⁻¹` when `right`.
///
/// Runs in 128-bit arithmetic and falls back to arbitrary precision on overflow.
///
/// # Panics
/// If an entry of the arbitrary-precision result does not fit in 128 bits.
pub fn snf_with(m: &Matrix, left: bool, right: bool) -> Snf {
    let small: GMat<i128> = GMat::from_matrix(m, |x| x);
    if let Some(w) = run(small, left, right) {
        return w.into_snf(|x: &i128| Some(*x));
    }
    let big: GMat<BigInt> = GMat::from_matrix(m, BigInt::from);
    let w = run(big, left, right).expect("arbitrary precision cannot overflow");
    w.into_snf(|x: &BigInt| x.to_i128())
}

/// Smith normal form with both transforms in arbitrary precision.
pub fn snf_exact(m: &Matrix) -> BigSnf {
    let big: GMat<BigInt> = GMat::from_matrix(m, BigInt::from);
    let w = run(big, true, true).expect("arbitrary precision cannot overflow");
    let n = w.m.rows.min(w.m.cols);
    let diag: Vec<BigInt> = (0..n).map(|i| w.m.get(i, i).clone()).collect();
    let rank = diag.iter().filter(|d| !Zero::is_zero(*d)).count();
    BigSnf { diag, rank, u: w.u.expect("left").to_rows(), v: w.v.expect("right").to_rows() }
}

trait Ring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn div_euclid(&self, o: &Self) -> Self;
    fn rem_euclid(&self, o: &Self) -> Self;
}

impl Ring for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_euclid(&self, o: &Self) -> Self {
        i128::div_euclid(*self, *o)
    }
    fn rem_euclid(&self, o: &Self) -> Self {
        i128::rem_euclid(*self, *o)
    }
}

impl Ring for BigInt {
    fn zero() -> Self {
        <BigInt as Zero>::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_euclid(&self, o: &Self) -> Self {
        let (q, r) = (self / o, self % o);
        if Signed::is_negative(&r) {
            if Signed::is_positive(o) {
                q - 1
            } else {
                q + 1
            }
        } else {
            q
        }
    }
    fn rem_euclid(&self, o: &Self) -> Self {
        let r = self % o;
        if Signed::is_negative(&r) {
            r + o.abs()
        } else {
            r
        }
    }
}

#[derive(Clone, Debug)]
struct GMat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Ring> GMat<T> {
    fn from_matrix(m: &Matrix, f: impl Fn(i128) -> T) -> Self {
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            data.extend(m.row(i).iter().map(|&x| f(x)));
        }
        GMat { rows: m.rows(), cols: m.cols(), data }
    }

    fn identity(n: usize) -> Self {
        let mut data = vec![T::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = T::one();
        }
        GMat { rows: n, cols: n, data }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect()
    }

    fn to_matrix(&self, f: impl Fn(&T) -> Option<i128>) -> Matrix {
        let rows: Vec<Vec<i128>> = self
            .to_rows()
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| f(x).expect("Smith transform entry exceeds the 128-bit range"))
                    .collect()
            })
            .collect();
        Matrix::from_rows(self.rows, self.cols, &rows)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += k·row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &T) -> Option<()> {
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let v = self.data[dst * self.cols + j].add(&k.mul(s)?)?;
                self.data[dst * self.cols + j] = v;
            }
        }
        Some(())
    }

    /// col[dst] += k·col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &T) -> Option<()> {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let v = self.data[i * self.cols + dst].add(&k.mul(s)?)?;
                self.data[i * self.cols + dst] = v;
            }
        }
        Some(())
    }

    fn negate_row(&mut self, r: usize) -> Option<()> {
        for j in 0..self.cols {
            self.data[r * self.cols + j] = self.data[r * self.cols + j].neg()?;
        }
        Some(())
    }

    fn negate_col(&mut self, c: usize) -> Option<()> {
        for i in 0..self.rows {
            self.data[i * self.cols + c] = self.data[i * self.cols + c].neg()?;
        }
        Some(())
    }
}

struct Work<T> {
    m: GMat<T>,
    u: Option<GMat<T>>,
    u_inv: Option<GMat<T>>,
    v: Option<GMat<T>>,
    v_inv: Option<GMat<T>>,
}

impl<T: Ring> Work<T> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.m.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
        if let Some(ui) = &mut self.u_inv {
            ui.swap_cols(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.m.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
        if let Some(vi) = &mut self.v_inv {
            vi.swap_rows(a, b);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, k: &T) -> Option<()> {
        if k.is_zero() {
            return Some(());
        }
        self.m.add_row(dst, src, k)?;
        if let Some(u) = &mut self.u {
            u.add_row(dst, src, k)?;
        }
        if let Some(ui) = &mut self.u_inv {
            ui.add_col(src, dst, &k.neg()?)?;
        }
        Some(())
    }

    fn negate_row(&mut self, r: usize) -> Option<()> {
        self.m.negate_row(r)?;
        if let Some(u) = &mut self.u {
            u.negate_row(r)?;
        }
        if let Some(ui) = &mut self.u_inv {
            ui.negate_col(r)?;
        }
        Some(())
    }

    fn into_snf(self, f: impl Fn(&T) -> Option<i128> + Copy) -> Snf {
        let n = self.m.rows.min(self.m.cols);
        let diag: Vec<i128> = (0..n)
            .map(|i| f(self.m.get(i, i)).expect("invariant factor exceeds the 128-bit range"))
            .collect();
        let rank = diag.iter().filter(|&&d| d != 0).count();
        Snf {
            diag,
            rank,
            u: self.u.map(|x| x.to_matrix(f)),
            u_inv: self.u_inv.map(|x| x.to_matrix(f)),
            v: self.v.map(|x| x.to_matrix(f)),
            v_inv: self.v_inv.map(|x| x.to_matrix(f)),
        }
    }
}

fn ext_gcd_ring<T: Ring>(a: &T, b: &T) -> Option<(T, T, T)> {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (T::one(), T::zero());
    let (mut old_t, mut t) = (T::zero(), T::one());
    while !r.is_zero() {
        let q = old_r.div_euclid(&r);
        let nq = q.neg()?;
        let next_r = old_r.add(&nq.mul(&r)?)?;
        let next_s = old_s.add(&nq.mul(&s)?)?;
        let next_t = old_t.add(&nq.mul(&t)?)?;
        old_r = std::mem::replace(&mut r, next_r);
        old_s = std::mem::replace(&mut s, next_s);
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        Some((old_r.neg()?, old_s.neg()?, old_t.neg()?))
    } else {
        Some((old_r, old_s, old_t))
    }
}

impl<T: Ring> GMat<T> {
    fn transpose(&self) -> GMat<T> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        GMat { rows: self.cols, cols: self.rows, data }
    }

    /// Rows `(p, q) <- (s·p + t·q, x·p + y·q)`.
    fn combine_rows(&mut self, p: usize, q: usize, c: &[T; 4]) -> Option<()> {
        for j in 0..self.cols {
            let (vp, vq) = (self.get(p, j).clone(), self.get(q, j).clone());
            if vp.is_zero() && vq.is_zero() {
                continue;
            }
            self.data[p * self.cols + j] = c[0].mul(&vp)?.add(&c[1].mul(&vq)?)?;
            self.data[q * self.cols + j] = c[2].mul(&vp)?.add(&c[3].mul(&vq)?)?;
        }
        Some(())
    }

    /// Columns `(p, q) <- (s·p + t·q, x·p + y·q)`.
    fn combine_cols(&mut self, p: usize, q: usize, c: &[T; 4]) -> Option<()> {
        for i in 0..self.rows {
            let (vp, vq) = (self.get(i, p).clone(), self.get(i, q).clone());
            if vp.is_zero() && vq.is_zero() {
                continue;
            }
            self.data[i * self.cols + p] = c[0].mul(&vp)?.add(&c[1].mul(&vq)?)?;
            self.data[i * self.cols + q] = c[2].mul(&vp)?.add(&c[3].mul(&vq)?)?;
        }
        Some(())
    }
}

impl<T: Ring> Work<T> {
    /// Unimodular row step with block `[s t; x y]` (determinant 1).
    fn combine_rows(&mut self, p: usize, q: usize, c: [T; 4]) -> Option<()> {
        self.m.combine_rows(p, q, &c)?;
        if let Some(u) = &mut self.u {
            u.combine_rows(p, q, &c)?;
        }
        if let Some(ui) = &mut self.u_inv {
            // Inverse block [y -t; -x s] acts on columns from the right.
            let inv = [c[3].clone(), c[2].neg()?, c[1].neg()?, c[0].clone()];
            ui.combine_cols(p, q, &inv)?;
        }
        Some(())
    }

    fn transpose_roles(self) -> Work<T> {
        Work {
            m: self.m.transpose(),
            u: self.v.map(|v| v.transpose()),
            u_inv: self.v_inv.map(|v| v.transpose()),
            v: self.u.map(|u| u.transpose()),
            v_inv: self.u_inv.map(|u| u.transpose()),
        }
    }

    /// Row Hermite form: positive pivots with the entries above each pivot in `[0, pivot)`.
    fn row_hermite(&mut self) -> Option<()> {
        let (r, c) = (self.m.rows, self.m.cols);
        let mut p = 0;
        for j in 0..c {
            if p == r {
                break;
            }
            for i in p + 1..r {
                let b = self.m.get(i, j).clone();
                if b.is_zero() {
                    continue;
                }
                let a = self.m.get(p, j).clone();
                if a.is_zero() {
                    self.swap_rows(p, i);
                    continue;
                }
                if b.rem_euclid(&a).is_zero() {
                    self.add_row(i, p, &b.div_euclid(&a).neg()?)?;
                } else {
                    let (g, s, t) = ext_gcd_ring(&a, &b)?;
                    let x = b.div_euclid(&g).neg()?;
                    let y = a.div_euclid(&g);
                    self.combine_rows(p, i, [s, t, x, y])?;
                }
            }
            if self.m.get(p, j).is_zero() {
                continue;
            }
            if self.m.get(p, j).is_negative() {
                self.negate_row(p)?;
            }
            let a = self.m.get(p, j).clone();
            for i in 0..p {
                let q = self.m.get(i, j).div_euclid(&a);
                self.add_row(i, p, &q.neg()?)?;
            }
            p += 1;
        }
        self.reduce_by_kernel(p)
    }

    /// Shortens the rows of `U` using its rows `p..` (zero rows of `m`).
    fn reduce_by_kernel(&mut self, p: usize) -> Option<()> {
        let r = self.m.rows;
        if self.u.is_none() || p >= r {
            return Some(());
        }
        loop {
            let mut changed = false;
            for i in p..r {
                for j in p..r {
                    if i != j && self.reduce_row_by(i, j)? {
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..p {
            for j in p..r {
                self.reduce_row_by(i, j)?;
            }
        }
        Some(())
    }

    /// `u_i -= round(<u_i,u_j>/<u_j,u_j>)·u_j` when that strictly shortens `u_i`.
    fn reduce_row_by(&mut self, i: usize, j: usize) -> Option<bool> {
        let u = self.u.as_ref().expect("left transform");
        let (mut dot, mut nn) = (T::zero(), T::zero());
        for k in 0..u.cols {
            let (a, b) = (u.get(i, k), u.get(j, k));
            dot = dot.add(&a.mul(b)?)?;
            nn = nn.add(&b.mul(b)?)?;
        }
        let two_dot = dot.add(&dot)?;
        let abs2 = if two_dot.is_negative() { two_dot.neg()? } else { two_dot.clone() };
        if nn.is_zero() || abs2.add(&nn.neg()?)?.is_negative() || abs2 == nn {
            return Some(false);
        }
        let c = two_dot.add(&nn)?.div_euclid(&nn.add(&nn)?);
        self.add_row(i, j, &c.neg()?)?;
        Some(true)
    }

    fn is_diagonal(&self) -> bool {
        (0..self.m.rows).all(|i| (0..self.m.cols).all(|j| i == j || self.m.get(i, j).is_zero()))
    }
}

/// Alternating row and column Hermite reductions until diagonal, then gcd/lcm
/// steps to enforce divisibility.
fn run<T: Ring>(m: GMat<T>, left: bool, right: bool) -> Option<Work<T>> {
    let (r, c) = (m.rows, m.cols);
    let mut w = Work {
        m,
        u: left.then(|| GMat::identity(r)),
        u_inv: left.then(|| GMat::identity(r)),
        v: right.then(|| GMat::identity(c)),
        v_inv: right.then(|| GMat::identity(c)),
    };
    let mut transposed = false;
    loop {
        w.row_hermite()?;
        if w.is_diagonal() {
            break;
        }
        w = w.transpose_roles();
        transposed = !transposed;
    }
    if transposed {
        w = w.transpose_roles();
    }
    let n = r.min(c);
    let mut nz = 0;
    for i in 0..n {
        if !w.m.get(i, i).is_zero() {
            if i != nz {
                w.swap_rows(i, nz);
                w.swap_cols(i, nz);
            }
            nz += 1;
        }
    }
    for i in 0..nz {
        for j in i + 1..nz {
            let (a, b) = (w.m.get(i, i).clone(), w.m.get(j, j).clone());
            if b.rem_euclid(&a).is_zero() {
                continue;
            }
            // diag(a, b) -> diag(g, l): rows by [s t; -b/g a/g], columns by [1 1; -t·b/g s·a/g].
            let (g, s, t) = ext_gcd_ring(&a, &b)?;
            let (bg, ag) = (b.div_euclid(&g), a.div_euclid(&g));
            w.combine_rows(i, j, [s.clone(), t.clone(), bg.neg()?, ag.clone()])?;
            let col = [T::one(), T::one(), t.mul(&bg)?.neg()?, s.mul(&ag)?];
            w.transpose_in_place_combine(i, j, col)?;
        }
    }
    Some(w)
}

impl<T: Ring> Work<T> {
    fn transpose_in_place_combine(&mut self, p: usize, q: usize, c: [T; 4]) -> Option<()> {
        self.m.combine_cols(p, q, &c)?;
        if let Some(v) = &mut self.v {
            v.combine_cols(p, q, &c)?;
        }
        if let Some(vi) = &mut self.v_inv {
            let inv = [c[3].clone(), c[2].neg()?, c[1].neg()?, c[0].clone()];
            vi.combine_rows(p, q, &inv)?;
        }
        Some(())
    }
}

/// Elementary operations on a matrix reduced modulo `modulus`, tracking `U` and `U⁻¹`.
struct ModWork {
    a: Matrix,
    u: Matrix,
    ui: Matrix,
    modulus: i128,
}

impl ModWork {
    fn md(&self, x: i128) -> i128 {
        x.rem_euclid(self.modulus)
    }

    fn add_row(&mut self, dst: usize, src: usize, k: i128) {
        let k = self.md(k);
        if k == 0 {
            return;
        }
        for j in 0..self.a.cols() {
            self.a[(dst, j)] = self.md(self.a[(dst, j)] + k * self.a[(src, j)]);
        }
        for j in 0..self.u.cols() {
            self.u[(dst, j)] = self.md(self.u[(dst, j)] + k * self.u[(src, j)]);
        }
        for i in 0..self.ui.rows() {
            self.ui[(i, src)] = self.md(self.ui[(i, src)] - k * self.ui[(i, dst)]);
        }
    }

    fn swap_rows(&mut self, x: usize, y: usize) {
        self.a.swap_rows(x, y);
        self.u.swap_rows(x, y);
        self.ui.swap_cols(x, y);
    }

    /// Rows `(p, q) <- [s t; x y]·(p, q)` for a block of determinant 1.
    fn combine_rows(&mut self, p: usize, q: usize, s: i128, t: i128, x: i128, y: i128) {
        let m = self.modulus;
        for mat in [&mut self.a, &mut self.u] {
            for j in 0..mat.cols() {
                let (vp, vq) = (mat[(p, j)], mat[(q, j)]);
                mat[(p, j)] = (s * vp + t * vq).rem_euclid(m);
                mat[(q, j)] = (x * vp + y * vq).rem_euclid(m);
            }
        }
        for i in 0..self.ui.rows() {
            let (vp, vq) = (self.ui[(i, p)], self.ui[(i, q)]);
            self.ui[(i, p)] = (y * vp - x * vq).rem_euclid(m);
            self.ui[(i, q)] = (-t * vp + s * vq).rem_euclid(m);
        }
    }

    /// Columns `(p, q) <- (s·p + t·q, x·p + y·q)`; columns are not tracked.
    fn combine_cols(&mut self, p: usize, q: usize, s: i128, t: i128, x: i128, y: i128) {
        for i in 0..self.a.rows() {
            let (vp, vq) = (self.a[(i, p)], self.a[(i, q)]);
            self.a[(i, p)] = self.md(s * vp + t * vq);
            self.a[(i, q)] = self.md(x * vp + y * vq);
        }
    }

    /// Scales row `t` by a unit so that the pivot becomes `gcd(pivot, modulus)`.
    fn normalize_pivot(&mut self, t: usize) {
        let p = self.a[(t, t)];
        let g = gcd(p, self.modulus);
        if p == g {
            return;
        }
        let mm = self.modulus / g;
        let (_, inv, _) = ext_gcd(p / g, mm);
        let mut unit = inv.rem_euclid(mm);
        while gcd(unit, self.modulus) != 1 {
            unit += mm;
        }
        let (_, unit_inv, _) = ext_gcd(unit, self.modulus);
        for j in 0..self.a.cols() {
            self.a[(t, j)] = self.md(self.a[(t, j)] * unit);
        }
        for j in 0..self.u.cols() {
            self.u[(t, j)] = self.md(self.u[(t, j)] * unit);
        }
        for i in 0..self.ui.rows() {
            self.ui[(i, t)] = self.md(self.ui[(i, t)] * unit_inv);
        }
        debug_assert_eq!(self.a[(t, t)], g);
    }
}

/// Left-tracked Smith form over `Z/modulus`, for a lattice known to contain
/// `modulus·Z^n`. Returns `(diag, U, U⁻¹)` where `diag` has one entry per row
/// (rows without a pivot report `modulus`) and `U`, `U⁻¹` are reduced modulo `modulus`.
pub fn snf_mod_left(m: &Matrix, modulus: i128) -> (Vec<i128>, Matrix, Matrix) {
    assert!(modulus > 0);
    let (r, c) = (m.rows(), m.cols());
    let mut a = m.clone();
    for i in 0..r {
        for j in 0..c {
            a[(i, j)] = a[(i, j)].rem_euclid(modulus);
        }
    }
    let mut w = ModWork { a, u: Matrix::identity(r), ui: Matrix::identity(r), modulus };
    let mut diag = vec![modulus; r];
    for t in 0..r.min(c) {
        let mut best: Option<(usize, usize, i128)> = None;
        for i in t..r {
            for j in t..c {
                if w.a[(i, j)] != 0 {
                    let g = gcd(w.a[(i, j)], modulus);
                    if best.is_none_or(|(_, _, b)| g < b) {
                        best = Some((i, j, g));
                    }
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        w.swap_rows(t, bi);
        w.a.swap_cols(t, bj);
        loop {
            w.normalize_pivot(t);
            let p = w.a[(t, t)];
            let mut changed = false;
            for i in t + 1..r {
                let b = w.a[(i, t)];
                if b == 0 {
                    continue;
                }
                if b % p == 0 {
                    w.add_row(i, t, -(b / p));
                } else {
                    let (g, s, tt) = ext_gcd(p, b);
                    w.combine_rows(t, i, s, tt, -(b / g), p / g);
                    changed = true;
                    break;
                }
            }
            if changed {
                continue;
            }
            for j in t + 1..c {
                let b = w.a[(t, j)];
                if b == 0 {
                    continue;
                }
                if b % p == 0 {
                    w.combine_cols(j, t, 1, -(b / p), 0, 1);
                } else {
                    let (g, s, tt) = ext_gcd(p, b);
                    w.combine_cols(t, j, s, tt, -(b / g), p / g);
                    changed = true;
                    break;
                }
            }
            if changed {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| w.a[(i, j)] % p != 0));
            match bad {
                Some(i) => w.add_row(t, i, 1),
                None => break,
            }
        }
        diag[t] = w.a[(t, t)];
    }
    (diag, w.u, w.ui)
}

/// Incrementally maintained integer row echelon basis of a lattice in `Z^n`,
/// optionally taken modulo `modulus·Z^n`.
pub struct EchelonBasis {
    ncols: usize,
    modulus: i128,
    /// Pivot rows indexed by leading column.
    pivots: Vec<Option<Vec<i128>>>,
}

impl EchelonBasis {
    /// `modulus == 0` means the lattice is taken over the integers; otherwise the
    /// caller guarantees `modulus·Z^n` lies inside the lattice.
    pub fn new(ncols: usize, modulus: i128) -> Self {
        EchelonBasis { ncols, modulus: modulus.abs(), pivots: vec![None; ncols] }
    }

    pub fn modulus(&self) -> i128 {
        self.modulus
    }

    fn normalize(&self, v: &mut [i128]) {
        if self.modulus != 0 {
            for x in v.iter_mut() {
                *x = x.rem_euclid(self.modulus);
            }
        }
    }

    pub fn insert(&mut self, mut row: Vec<i128>) {
        use super::matrix::{checked_add, checked_mul};
        assert_eq!(row.len(), self.ncols);
        self.normalize(&mut row);
        let mut start = 0;
        loop {
            let Some(lead) = (start..self.ncols).find(|&j| row[j] != 0) else {
                return;
            };
            start = lead;
            match self.pivots[lead].take() {
                None => {
                    self.pivots[lead] = Some(row);
                    return;
                }
                Some(mut p) => {
                    let (a, b) = (p[lead], row[lead]);
                    if b % a == 0 {
                        let k = b / a;
                        for j in lead..self.ncols {
                            row[j] = checked_add(row[j], checked_mul(-k, p[j]));
                        }
                    } else {
                        let (g, s, t) = ext_gcd(a, b);
                        let (x, y) = (-(b / g), a / g);
                        for j in lead..self.ncols {
                            let (pj, rj) = (p[j], row[j]);
                            p[j] = checked_add(checked_mul(s, pj), checked_mul(t, rj));
                            row[j] = checked_add(checked_mul(x, pj), checked_mul(y, rj));
                        }
                        self.normalize(&mut p);
                    }
                    self.normalize(&mut row);
                    self.pivots[lead] = Some(p);
                }
            }
        }
    }

    /// Echelon rows (without the implicit `modulus·e_j` rows).
    pub fn rows(&self) -> Vec<Vec<i128>> {
        self.pivots.iter().flatten().cloned().collect()
    }
}
