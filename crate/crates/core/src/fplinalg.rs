//! Dense matrices over `Z/p^K`: uniform sampling from `GL(n, p)`, Jordan
//! partitions for degree-one eigenvalues, Smith normal form, random cokernels
//! and the quotient-by-random-elements process.

use num_integer::Integer;
use rand::Rng;

use crate::arith::Prime;
use crate::error::{Error, Result};
use crate::partitions::{GroupShape, Partition};

/// Row-major `rows × cols` matrix with entries reduced mod `p^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModMatrix {
    rows: usize,
    cols: usize,
    p: Prime,
    k: u32,
    modulus: u64,
    entries: Vec<u64>,
}

fn modulus_for(p: Prime, k: u32) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidParameter("modulus exponent K must be at least 1".into()));
    }
    p.get()
        .checked_pow(k)
        .filter(|&m| m < 1 << 62)
        .ok_or_else(|| Error::InvalidParameter(format!("{}^{k} does not fit in 62 bits", p.get())))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    (a as u128 * b as u128 % m as u128) as u64
}

/// Inverse of a unit mod `m`.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    (g.gcd == 1).then(|| g.x.rem_euclid(m as i128) as u64)
}

impl ModMatrix {
    pub fn new(rows: usize, cols: usize, p: Prime, k: u32, entries: Vec<u64>) -> Result<Self> {
        let modulus = modulus_for(p, k)?;
        if entries.len() != rows * cols {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        let entries = entries.into_iter().map(|x| x % modulus).collect();
        Ok(ModMatrix { rows, cols, p, k, modulus, entries })
    }

    /// Builds a matrix from signed rows, reducing each entry.
    pub fn from_rows(rows: &[Vec<i64>], p: Prime, k: u32) -> Result<Self> {
        let modulus = modulus_for(p, k)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParameter("ragged rows".into()));
        }
        let entries = rows.iter().flatten().map(|&x| x.rem_euclid(modulus as i64) as u64).collect();
        ModMatrix::new(rows.len(), cols, p, k, entries)
    }

    pub fn zeros(rows: usize, cols: usize, p: Prime, k: u32) -> Result<Self> {
        ModMatrix::new(rows, cols, p, k, vec![0; rows * cols])
    }

    pub fn identity(n: usize, p: Prime, k: u32) -> Result<Self> {
        let mut m = ModMatrix::zeros(n, n, p, k)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    /// Uniform entries in `Z/p^k`.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, p: Prime, k: u32, rng: &mut R) -> Result<Self> {
        let modulus = modulus_for(p, k)?;
        let entries = (0..rows * cols).map(|_| rng.random_range(0..modulus)).collect();
        Ok(ModMatrix { rows, cols, p, k, modulus, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.entries[i * self.cols + j] = x % self.modulus;
    }

    pub fn mul(&self, other: &ModMatrix) -> ModMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        assert_eq!((self.p, self.k), (other.p, other.k), "different rings");
        let m = self.modulus;
        let mut out = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cell = &mut out[i * other.cols + j];
                    *cell = (*cell + mul_mod(a, other.get(l, j), m)) % m;
                }
            }
        }
        ModMatrix { rows: self.rows, cols: other.cols, entries: out, ..*self }
    }

    /// `self - a·I`.
    pub fn minus_scalar(&self, a: u64) -> ModMatrix {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let mut out = self.clone();
        for i in 0..self.rows {
            let x = (self.get(i, i) + self.modulus - a % self.modulus) % self.modulus;
            out.set(i, i, x);
        }
        out
    }

    /// Entries reduced mod `p`, row-reduced in place; returns the rank.
    fn rank_mod_p_of(mut e: Vec<u64>, rows: usize, cols: usize, p: u64) -> usize {
        for x in e.iter_mut() {
            *x %= p;
        }
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows).find(|&r| e[r * cols + c] != 0) else { continue };
            for j in 0..cols {
                e.swap(piv * cols + j, rank * cols + j);
            }
            let inv = inv_mod(e[rank * cols + c], p).expect("nonzero residue is a unit");
            for j in 0..cols {
                e[rank * cols + j] = e[rank * cols + j] * inv % p;
            }
            for r in 0..rows {
                let f = e[r * cols + c];
                if r != rank && f != 0 {
                    for j in 0..cols {
                        e[r * cols + j] = (e[r * cols + j] + (p - f) * e[rank * cols + j]) % p;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn rank_mod_p(&self) -> usize {
        ModMatrix::rank_mod_p_of(self.entries.clone(), self.rows, self.cols, self.p.get())
    }

    /// Dimension of the kernel mod `p` (acting on column vectors).
    pub fn nullity_mod_p(&self) -> usize {
        self.cols - self.rank_mod_p()
    }

    pub fn det_mod_p(&self) -> u64 {
        assert_eq!(self.rows, self.cols, "square matrix required");
        let p = self.p.get();
        let n = self.rows;
        let mut e: Vec<u64> = self.entries.iter().map(|x| x % p).collect();
        let mut det = 1u64;
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| e[r * n + c] != 0) else { return 0 };
            if piv != c {
                for j in 0..n {
                    e.swap(piv * n + j, c * n + j);
                }
                det = (p - det) % p;
            }
            det = det * e[c * n + c] % p;
            let inv = inv_mod(e[c * n + c], p).expect("nonzero residue is a unit");
            for r in c + 1..n {
                let f = e[r * n + c] * inv % p;
                if f != 0 {
                    for j in c..n {
                        e[r * n + j] = (e[r * n + j] + (p - f) * e[c * n + j]) % p;
                    }
                }
            }
        }
        det
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.det_mod_p() != 0
    }

    /// Inverse over `Z/p^k`, or `None` if the determinant is not a unit.
    pub fn inverse(&self) -> Option<ModMatrix> {
        if !self.is_invertible() {
            return None;
        }
        let n = self.rows;
        let m = self.modulus;
        let w = 2 * n;
        let mut e = vec![0u64; n * w];
        for i in 0..n {
            for j in 0..n {
                e[i * w + j] = self.get(i, j);
            }
            e[i * w + n + i] = 1;
        }
        for c in 0..n {
            let piv = (c..n).find(|&r| e[r * w + c] % self.p.get() != 0)?;
            for j in 0..w {
                e.swap(piv * w + j, c * w + j);
            }
            let inv = inv_mod(e[c * w + c], m)?;
            for j in 0..w {
                e[c * w + j] = mul_mod(e[c * w + j], inv, m);
            }
            for r in 0..n {
                let f = e[r * w + c];
                if r != c && f != 0 {
                    for j in 0..w {
                        e[r * w + j] = (e[r * w + j] + m - mul_mod(f, e[c * w + j], m)) % m;
                    }
                }
            }
        }
        let entries = (0..n).flat_map(|i| e[i * w + n..(i + 1) * w].to_vec()).collect();
        Some(ModMatrix { entries, ..self.clone() })
    }

    /// Jordan partition `λ_{X-a}` of a matrix over `F_p`: with
    /// `d_j = nullity((M - aI)^j)` the conjugate has rows `d_j - d_{j-1}`.
    pub fn partition_at(&self, a: u64) -> Partition {
        assert_eq!(self.k, 1, "Jordan data is read over F_p");
        assert!(a % self.p.get() != 0, "a must be a unit");
        let shifted = self.minus_scalar(a);
        let mut power = shifted.clone();
        let mut prev = 0usize;
        let mut rows = Vec::new();
        loop {
            let d = power.nullity_mod_p();
            if d == prev {
                break;
            }
            rows.push((d - prev) as u32);
            prev = d;
            power = power.mul(&shifted);
        }
        Partition::new(rows).expect("nullity jumps are non-increasing").conjugate()
    }

    /// Dimension of the space of vectors fixed by the matrix.
    pub fn fixed_space_dim(&self) -> usize {
        self.minus_scalar(1).nullity_mod_p()
    }

    /// Smith normal form exponents: the `p`-adic valuations of the invariant
    /// factors, with `k` standing for zero, sorted decreasing. When there are
    /// more rows than columns the extra rows contribute `k` each, so the list
    /// always has `rows` entries and describes the cokernel `∏ Z/p^{v_i}`.
    pub fn smith_exponents(&self) -> Vec<u32> {
        let (rows, cols, m) = (self.rows, self.cols, self.modulus);
        let p = self.p.get();
        let mut e = self.entries.clone();
        let val = |x: u64| -> u32 {
            if x == 0 {
                return self.k;
            }
            let mut v = 0;
            let mut y = x;
            while y % p == 0 {
                y /= p;
                v += 1;
            }
            v
        };
        let mut out = Vec::with_capacity(rows);
        for t in 0..rows.min(cols) {
            let mut best: Option<(u32, usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    let v = val(e[i * cols + j]);
                    if v < self.k && best.is_none_or(|b| v < b.0) {
                        best = Some((v, i, j));
                    }
                }
            }
            let Some((v, bi, bj)) = best else {
                out.extend(std::iter::repeat_n(self.k, rows - t));
                break;
            };
            for j in 0..cols {
                e.swap(bi * cols + j, t * cols + j);
            }
            for i in 0..rows {
                e.swap(i * cols + bj, i * cols + t);
            }
            let pv = p.pow(v);
            let unit = e[t * cols + t] / pv;
            let uinv = inv_mod(unit, m).expect("pivot cofactor is a unit");
            for j in t..cols {
                e[t * cols + j] = mul_mod(e[t * cols + j], uinv, m);
            }
            for i in t + 1..rows {
                let f = e[i * cols + t] / pv;
                if f != 0 {
                    for j in t..cols {
                        e[i * cols + j] = (e[i * cols + j] + m - mul_mod(f, e[t * cols + j], m)) % m;
                    }
                }
            }
            for j in t + 1..cols {
                e[t * cols + j] = 0;
            }
            out.push(v);
        }
        if rows > cols && out.len() < rows {
            out.extend(std::iter::repeat_n(self.k, rows - out.len()));
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }
}

/// Uniform invertible `n × n` matrix over `Z/p^k` by rejection, with the
/// number of attempts used.
pub fn random_invertible<R: Rng + ?Sized>(n: usize, p: Prime, k: u32, rng: &mut R) -> Result<(ModMatrix, u32)> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let mut attempts = 0;
    loop {
        attempts += 1;
        let m = ModMatrix::random(n, n, p, k, rng)?;
        if m.is_invertible() {
            return Ok((m, attempts));
        }
    }
}

/// Uniform element of `GL(n, p)`.
pub fn random_gl<R: Rng + ?Sized>(n: usize, p: Prime, rng: &mut R) -> Result<ModMatrix> {
    random_invertible(n, p, 1, rng).map(|(m, _)| m)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CokernelSample {
    pub partition: Partition,
    /// Some part reached `K`, so the true part may be larger.
    pub saturated: bool,
}

/// Cokernel of a uniform `n × n` matrix over `Z/p^k`.
pub fn cokernel_sample<R: Rng + ?Sized>(n: usize, p: Prime, k: u32, rng: &mut R) -> Result<CokernelSample> {
    let m = ModMatrix::random(n, n, p, k, rng)?;
    let exps = m.smith_exponents();
    let saturated = exps.contains(&k);
    let partition = Partition::from_unsorted(exps.into_iter().filter(|&v| v > 0).collect());
    Ok(CokernelSample { partition, saturated })
}

/// `H/⟨g_1, …, g_u⟩` for `u` uniform elements `g_j` of `H`, computed as the
/// cokernel of `[diag(p^{λ_i}) | g_1 … g_u]` over `Z/p^{λ_1+1}`.
pub fn quotient_by_random_elements<R: Rng + ?Sized>(
    shape: &GroupShape,
    u: u32,
    p: Prime,
    rng: &mut R,
) -> Result<GroupShape> {
    if u == 0 {
        return Err(Error::InvalidParameter("u must be at least 1".into()));
    }
    let lam = shape.to_partition();
    if lam.is_empty() {
        return Ok(GroupShape::trivial());
    }
    let k = lam.largest() + 1;
    let rows = lam.len();
    let cols = rows + u as usize;
    let mut rel = ModMatrix::zeros(rows, cols, p, k)?;
    for (i, &e) in lam.parts().iter().enumerate() {
        rel.set(i, i, p.get().pow(e));
        let order = p.get().pow(e);
        for j in rows..cols {
            rel.set(i, j, rng.random_range(0..order));
        }
    }
    let parts = rel.smith_exponents().into_iter().filter(|&v| v > 0).collect();
    Ok(Partition::from_unsorted(parts).to_group_shape())
}
