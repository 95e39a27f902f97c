//! Complex linear algebra for qubit (2×2) and two-qubit (4×4) operators.
//!
//! Matrices are dense, row-major and immutable once built. Only dimensions 2
//! and 4 exist; anything else is rejected at construction.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance;

pub type C64 = Complex64;

/// `√3`, the ratio between the calibration parameter and the Werner threshold.
pub const SQRT_3: f64 = 1.732_050_807_568_877_2;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, data: vec![ZERO; dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::Argument(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, data: entries })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = C64::new(d, 0.0);
        }
        Ok(m)
    }

    /// `|ψ⟩⟨ψ|` for an (unnormalised) ket.
    pub fn outer(ket: &[C64]) -> Result<Self> {
        let dim = ket.len();
        check_dim(dim)?;
        let data = (0..dim * dim)
            .map(|idx| ket[idx / dim] * ket[idx % dim].conj())
            .collect();
        Ok(Self { dim, data })
    }

    /// Qubit operator `c·1 + v·σ`.
    pub fn from_pauli_components(c: f64, v: [f64; 3]) -> Self {
        let [x, y, z] = v;
        Self {
            dim: 2,
            data: vec![
                C64::new(c + z, 0.0),
                C64::new(x, -y),
                C64::new(x, y),
                C64::new(c - z, 0.0),
            ],
        }
    }

    /// `½(1 + n·σ)`.
    pub fn bloch_state(n: &BlochVector) -> Self {
        let [x, y, z] = n.to_array();
        Self::from_pauli_components(0.5, [0.5 * x, 0.5 * y, 0.5 * z])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        let dim = self.dim;
        let data = (0..dim * dim)
            .map(|idx| self.data[(idx % dim) * dim + idx / dim].conj())
            .collect();
        Self { dim, data }
    }

    pub fn scale(&self, factor: f64) -> Self {
        self.scale_complex(C64::new(factor, 0.0))
    }

    pub fn scale_complex(&self, factor: C64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|&z| z * factor).collect() }
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::Argument(format!(
                "dimension mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(Self { dim: n, data })
    }

    /// `Tr[self · other]` without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<C64> {
        self.same_dim(other)?;
        let n = self.dim;
        let mut acc = ZERO;
        for i in 0..n {
            for k in 0..n {
                acc += self.data[i * n + k] * other.data[k * n + i];
            }
        }
        Ok(acc)
    }

    /// Largest `|m_ij − conj(m_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation() <= tolerance::HERMITIAN
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Pauli components `(c, v)` of a Hermitian qubit operator `c·1 + v·σ`.
    pub fn pauli_components(&self) -> Result<(f64, [f64; 3])> {
        if self.dim != 2 {
            return Err(Error::Argument(format!(
                "Pauli decomposition needs a 2x2 matrix, got {0}x{0}",
                self.dim
            )));
        }
        let c = 0.5 * (self.get(0, 0).re + self.get(1, 1).re);
        let z = 0.5 * (self.get(0, 0).re - self.get(1, 1).re);
        let off = self.get(1, 0);
        Ok((c, [off.re, off.im, z]))
    }

    /// Bloch vector `n_i = Tr[ρ σ_i]` of a qubit operator.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        let (_, v) = self.pauli_components()?;
        Ok([2.0 * v[0], 2.0 * v[1], 2.0 * v[2]])
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({0}x{0}) [", self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: Self) -> ComplexMatrix {
        self.try_add(rhs).expect("matrix dimensions must agree")
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: Self) -> ComplexMatrix {
        self.try_sub(rhs).expect("matrix dimensions must agree")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: Self) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

/// A qubit Bloch vector with `|n| ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Self { x, y, z };
        if !(x.is_finite() && y.is_finite() && z.is_finite()) {
            return Err(Error::Argument(format!("non-finite Bloch vector {v:?}")));
        }
        if v.norm() > 1.0 + tolerance::BLOCH_NORM {
            return Err(Error::Argument(format!(
                "Bloch vector norm {} exceeds 1",
                v.norm()
            )));
        }
        Ok(v)
    }

    pub fn from_array(v: [f64; 3]) -> Result<Self> {
        Self::new(v[0], v[1], v[2])
    }

    /// Unit vector along `v`; `None` for the zero vector.
    pub fn direction(v: [f64; 3]) -> Option<Self> {
        let n = norm3(v);
        (n > 0.0).then(|| Self { x: v[0] / n, y: v[1] / n, z: v[2] / n })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        norm3(self.to_array())
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot3(self.to_array(), other.to_array())
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.x * factor, self.y * factor, self.z * factor)
    }
}

pub fn dot3(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm3(a: [f64; 3]) -> f64 {
    dot3(a, a).sqrt()
}

/// The Pauli matrix `σ_j`, `j ∈ {1, 2, 3}`.
pub fn pauli(j: u8) -> Result<ComplexMatrix> {
    let mut v = [0.0; 3];
    match j {
        1..=3 => v[usize::from(j - 1)] = 1.0,
        _ => return Err(Error::Argument(format!("Pauli index {j} not in 1..=3"))),
    }
    Ok(ComplexMatrix::from_pauli_components(0.0, v))
}

/// Kronecker product `a ⊗ b` with `(i_a, i_b) → i_a·dim_b + i_b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let dim = a.dim * b.dim;
    if dim > 4 {
        return Err(Error::UnsupportedDimension(dim));
    }
    let mut out = ComplexMatrix::zeros(dim)?;
    for ia in 0..a.dim {
        for ja in 0..a.dim {
            let x = a.get(ia, ja);
            for ib in 0..b.dim {
                for jb in 0..b.dim {
                    out.data[(ia * b.dim + ib) * dim + ja * b.dim + jb] = x * b.get(ib, jb);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Traces out `subsystem` of a two-qubit operator.
pub fn partial_trace(m: &ComplexMatrix, subsystem: Subsystem) -> Result<ComplexMatrix> {
    if m.dim != 4 {
        return Err(Error::Argument(format!(
            "partial trace needs a 4x4 operator, got {0}x{0}",
            m.dim
        )));
    }
    let mut out = ComplexMatrix::zeros(2)?;
    for i in 0..2 {
        for j in 0..2 {
            out.data[i * 2 + j] = (0..2)
                .map(|k| match subsystem {
                    Subsystem::Second => m.get(i * 2 + k, j * 2 + k),
                    Subsystem::First => m.get(k * 2 + i, k * 2 + j),
                })
                .sum();
        }
    }
    Ok(out)
}

/// Eigenvalues of a Hermitian matrix, sorted descending.
///
/// Qubit operators use the closed form `c ± |v|` for `c·1 + v·σ`. The 4×4
/// case diagonalises the real 8×8 embedding `[[X, −Y], [Y, X]]` of
/// `X + iY` by cyclic Jacobi; every eigenvalue appears twice there.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let dev = m.hermitian_deviation();
    if dev > tolerance::HERMITIAN {
        return Err(Error::Domain(format!(
            "matrix is not Hermitian (max deviation {dev:e})"
        )));
    }
    match m.dim {
        2 => {
            let (c, v) = m.pauli_components()?;
            let r = norm3(v);
            Ok(vec![c + r, c - r])
        }
        4 => {
            let n = 8;
            let mut a = vec![0.0_f64; n * n];
            for i in 0..4 {
                for j in 0..4 {
                    // Hermitian part only, so the embedding is exactly symmetric.
                    let z = 0.5 * (m.get(i, j) + m.get(j, i).conj());
                    a[i * n + j] = z.re;
                    a[(i + 4) * n + (j + 4)] = z.re;
                    a[i * n + (j + 4)] = -z.im;
                    a[(i + 4) * n + j] = z.im;
                }
            }
            let mut doubled = jacobi_eigenvalues(a, n);
            doubled.sort_by(|x, y| y.total_cmp(x));
            Ok(doubled.iter().step_by(2).copied().collect())
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j] * a[i * n + j];
                }
            }
        }
        s.sqrt()
    };
    for _sweep in 0..100 {
        if off(&a) <= tolerance::JACOBI {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Outcome of [`is_density_matrix`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityCheck {
    pub is_valid: bool,
    pub hermitian_deviation: f64,
    pub trace: C64,
    /// `None` when the matrix is too far from Hermitian to diagonalise.
    pub min_eigenvalue: Option<f64>,
}

pub fn is_density_matrix(m: &ComplexMatrix) -> DensityCheck {
    let hermitian_deviation = m.hermitian_deviation();
    let trace = m.trace();
    let min_eigenvalue = eig_hermitian(m).ok().and_then(|e| e.last().copied());
    let is_valid = hermitian_deviation <= tolerance::HERMITIAN
        && (trace - ONE).norm() <= tolerance::TRACE
        && min_eigenvalue.is_some_and(|e| e >= -tolerance::PSD);
    DensityCheck { is_valid, hermitian_deviation, trace, min_eigenvalue }
}

/// Applies a real function to the spectrum of a Hermitian qubit operator.
pub fn hermitian_function_2x2(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    if !m.is_hermitian() {
        return Err(Error::Domain("matrix is not Hermitian".into()));
    }
    let (c, v) = m.pauli_components()?;
    let r = norm3(v);
    let (hi, lo) = (f(c + r), f(c - r));
    let mean = 0.5 * (hi + lo);
    if r == 0.0 {
        return Ok(ComplexMatrix::from_pauli_components(mean, [0.0; 3]));
    }
    let k = 0.5 * (hi - lo) / r;
    Ok(ComplexMatrix::from_pauli_components(mean, [k * v[0], k * v[1], k * v[2]]))
}
