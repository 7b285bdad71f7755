//! Dense complex matrices sized for small Hilbert spaces.
//!
//! Everything here is row-major `Vec<Complex64>` with explicit dimensions.
//! The eigendecomposition is delegated to nalgebra's symmetric solver after
//! a Hermiticity gate; all other operations are written out directly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix data has {} entries, expected {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, Complex64::new(v, 0.0));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise deviation from the conjugate transpose.
    pub fn hermiticity_error(&self) -> f64 {
        assert!(self.is_square(), "hermiticity of a non-square matrix");
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in r..self.cols {
                let dev = (self.get(r, c) - self.get(c, r).conj()).norm();
                worst = worst.max(dev);
            }
        }
        worst
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| {
            (self.get(r, c) + self.get(c, r).conj()) * 0.5
        })
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn scale_mut(&mut self, factor: f64) {
        for v in &mut self.data {
            *v *= factor;
        }
    }

    /// `self += c * other`, entrywise.
    pub fn add_scaled_mut(&mut self, c: f64, other: &Self) {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in add_scaled_mut"
        );
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * c;
        }
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in max_abs_diff"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub(crate) fn to_re_im_pairs(&self) -> Vec<[f64; 2]> {
        self.data.iter().map(|v| [v.re, v.im]).collect()
    }

    pub(crate) fn from_re_im_pairs(rows: usize, cols: usize, pairs: &[[f64; 2]]) -> Result<Self> {
        let data = pairs
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Self::new(rows, cols, data)
    }
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..rhs.cols {
                    out.data[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        out
    }
}

/// `Tr(a b)` without forming the product.
pub fn mul_trace(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    assert_eq!(a.cols, b.rows, "shape mismatch in mul_trace");
    assert_eq!(a.rows, b.cols, "shape mismatch in mul_trace");
    let mut acc = Complex64::ZERO;
    for r in 0..a.rows {
        for c in 0..a.cols {
            acc += a.get(r, c) * b.get(c, r);
        }
    }
    acc
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    let mut out = ComplexMatrix::zeros(rows, cols);
    for ar in 0..a.rows {
        for ac in 0..a.cols {
            let v = a.get(ar, ac);
            if v == Complex64::ZERO {
                continue;
            }
            for br in 0..b.rows {
                for bc in 0..b.cols {
                    out.set(ar * b.rows + br, ac * b.cols + bc, v * b.get(br, bc));
                }
            }
        }
    }
    out
}

/// Trace out the first factor of a `dim_first * dim_second` square matrix.
pub fn partial_trace_first(
    m: &ComplexMatrix,
    dim_first: usize,
    dim_second: usize,
) -> Result<ComplexMatrix> {
    let n = dim_first * dim_second;
    if !m.is_square() || m.rows != n {
        return Err(Error::DimensionMismatch(format!(
            "partial trace expects a {n}x{n} matrix for factors {dim_first}x{dim_second}, \
             got {}x{}",
            m.rows, m.cols
        )));
    }
    let mut out = ComplexMatrix::zeros(dim_second, dim_second);
    for t in 0..dim_first {
        for p in 0..dim_second {
            for q in 0..dim_second {
                let v = out.get(p, q) + m.get(t * dim_second + p, t * dim_second + q);
                out.set(p, q, v);
            }
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Real eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Unitary whose column `j` is the eigenvector for `values[j]`.
    pub vectors: ComplexMatrix,
}

fn to_nalgebra(m: &ComplexMatrix) -> nalgebra::DMatrix<Complex64> {
    nalgebra::DMatrix::from_row_slice(m.rows, m.cols, &m.data)
}

fn hermiticity_gate(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows, m.cols
        )));
    }
    let dev = m.hermiticity_error();
    if dev > tol::HERMITICITY_GATE {
        return Err(Error::NotHermitian {
            deviation: dev,
            tolerance: tol::HERMITICITY_GATE,
        });
    }
    Ok(m.hermitian_part())
}

pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen> {
    let h = hermiticity_gate(m)?;
    let n = h.rows;
    let se = to_nalgebra(&h).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&j| se.eigenvalues[j]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| se.eigenvectors[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let h = hermiticity_gate(m)?;
    let vals = to_nalgebra(&h).symmetric_eigenvalues();
    Ok(vals.iter().fold(f64::INFINITY, |acc, &v| acc.min(v)))
}

/// Nearest (Frobenius) positive-semidefinite matrix: clip negative
/// eigenvalues of the Hermitian part to zero.
pub fn psd_project(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.hermitian_part();
    clip_psd_in_place(&mut out);
    out
}

/// Replace `m` (assumed within the Hermiticity gate) by its PSD projection.
/// Returns the violation that was removed: `max(0, -lambda_min)`.
pub(crate) fn clip_psd_in_place(m: &mut ComplexMatrix) -> f64 {
    let h = m.hermitian_part();
    let n = h.rows;
    let se = to_nalgebra(&h).symmetric_eigen();
    let mut violation = 0.0f64;
    let mut any_negative = false;
    for j in 0..n {
        let v = se.eigenvalues[j];
        if v < 0.0 {
            any_negative = true;
            violation = violation.max(-v);
        }
    }
    if !any_negative {
        *m = h;
        return 0.0;
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let lam = se.eigenvalues[j];
        if lam <= 0.0 {
            continue;
        }
        for r in 0..n {
            let vr = se.eigenvectors[(r, j)] * lam;
            for c in 0..n {
                out.data[r * n + c] += vr * se.eigenvectors[(c, j)].conj();
            }
        }
    }
    *m = out;
    violation
}

/// Unit-trace positive-semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Invariant {
                field: "state",
                detail: format!("not square: {}x{}", matrix.rows(), matrix.cols()),
            });
        }
        let herm = matrix.hermiticity_error();
        if herm > tol::STRUCTURAL {
            return Err(Error::Invariant {
                field: "state",
                detail: format!("not Hermitian: deviation {herm:.3e}"),
            });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > tol::STRUCTURAL || tr.im.abs() > tol::STRUCTURAL {
            return Err(Error::Invariant {
                field: "state",
                detail: format!("trace {tr} is not 1"),
            });
        }
        let min_eig = min_eigenvalue(&matrix)?;
        if min_eig < -tol::PSD_SLACK {
            return Err(Error::Invariant {
                field: "state",
                detail: format!("negative eigenvalue {min_eig:.3e}"),
            });
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        assert!(dim > 0, "zero-dimensional state");
        let mut m = ComplexMatrix::identity(dim);
        m.scale_mut(1.0 / dim as f64);
        Self { matrix: m }
    }

    /// Projector onto the (normalized) amplitude vector.
    pub fn from_pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm_sqr.is_finite() && norm_sqr > 0.0) {
            return Err(Error::Invariant {
                field: "state",
                detail: "pure state amplitudes have zero or non-finite norm".into(),
            });
        }
        let n = amplitudes.len();
        let matrix = ComplexMatrix::from_fn(n, n, |r, c| {
            amplitudes[r] * amplitudes[c].conj() / norm_sqr
        });
        Ok(Self { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// Positive operators summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    elements: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(elements: Vec<ComplexMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Invariant {
                field: "measurement",
                detail: "no outcomes".into(),
            });
        }
        let dim = elements[0].rows();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (b, el) in elements.iter().enumerate() {
            if !el.is_square() || el.rows() != dim {
                return Err(Error::Invariant {
                    field: "measurement",
                    detail: format!(
                        "outcome {b} is {}x{}, expected {dim}x{dim}",
                        el.rows(),
                        el.cols()
                    ),
                });
            }
            let herm = el.hermiticity_error();
            if herm > tol::STRUCTURAL {
                return Err(Error::Invariant {
                    field: "measurement",
                    detail: format!("outcome {b} not Hermitian: deviation {herm:.3e}"),
                });
            }
            let min_eig = min_eigenvalue(el)?;
            if min_eig < -tol::PSD_SLACK {
                return Err(Error::Invariant {
                    field: "measurement",
                    detail: format!("outcome {b} has negative eigenvalue {min_eig:.3e}"),
                });
            }
            sum = &sum + el;
        }
        let completeness = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if completeness > tol::STRUCTURAL {
            return Err(Error::Invariant {
                field: "measurement",
                detail: format!("outcomes sum to identity only within {completeness:.3e}"),
            });
        }
        Ok(Self { elements })
    }

    /// Projective measurement in the computational basis.
    pub fn computational_basis(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|i| {
                let mut m = ComplexMatrix::zeros(dim, dim);
                m.set(i, i, Complex64::ONE);
                m
            })
            .collect();
        Self { elements }
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn num_outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn element(&self, b: usize) -> &ComplexMatrix {
        &self.elements[b]
    }
}
