//! Least-squares fits over sampled operator iterates: the type-1 eigen
//! relation, monic minimal relations with a translation term, and the 3x3
//! coordinate matrix relation.
//!
//! Translation unknowns are carried as extra constant columns of the design
//! matrix rather than by pre-centering the data, so the recovered center is
//! part of the fit and reported.

use crate::beltrami::{
    iterate_vector_on_grid, position_fields, BeltramiError, GridShape, MetricChoice, MetricField,
};
use crate::geometry::SurfaceGrid;
use crate::par::EvalMode;
use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChenTypeError {
    #[error("iterate matrix needs columns up to k = {needed}, only {have} present")]
    MissingColumns { needed: usize, have: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error(transparent)]
    Beltrami(#[from] BeltramiError),
}

/// Iterate samples `y_k = L^k x` over one fixed sample set.
#[derive(Clone, Debug)]
pub struct IterateMatrix {
    /// Grid indices the rows were taken from.
    pub samples: Vec<usize>,
    /// Parameter values per row, kept for audit dumps.
    pub uv: Vec<(f64, f64)>,
    /// `columns[k][row]` is the E3 value of the k-th iterate.
    pub columns: Vec<Vec<[f64; 3]>>,
}

impl IterateMatrix {
    pub fn new(samples: Vec<usize>, uv: Vec<(f64, f64)>, columns: Vec<Vec<[f64; 3]>>) -> Self {
        assert_eq!(samples.len(), uv.len());
        for col in &columns {
            assert_eq!(col.len(), samples.len());
        }
        IterateMatrix {
            samples,
            uv,
            columns,
        }
    }

    /// Samples the position vector and `k_max` successive applications of the
    /// chosen-form operator, restricted to the sample set that survives every
    /// stencil pass.
    pub fn from_grid(
        grid: &SurfaceGrid,
        choice: MetricChoice,
        k_max: usize,
        mode: EvalMode,
    ) -> Result<Self, ChenTypeError> {
        let shape = GridShape::of(grid);
        let metric = MetricField::from_grid(grid, choice);
        let x = position_fields(grid);
        let iterates = iterate_vector_on_grid(shape, &metric, &x, k_max, mode)?;
        let final_mask = match iterates.last() {
            Some(last) => &last[0].mask,
            None => &x[0].mask,
        };
        let samples: Vec<usize> = (0..grid.len()).filter(|&i| final_mask[i]).collect();
        if samples.is_empty() {
            return Err(BeltramiError::EmptyMask.into());
        }
        let uv = samples.iter().map(|&i| grid.uv(i)).collect();
        let mut columns = Vec::with_capacity(k_max + 1);
        let gather = |fields: &[crate::beltrami::Field; 3]| -> Vec<[f64; 3]> {
            samples
                .iter()
                .map(|&i| {
                    [
                        fields[0].values[i],
                        fields[1].values[i],
                        fields[2].values[i],
                    ]
                })
                .collect()
        };
        columns.push(gather(&x));
        for it in &iterates {
            columns.push(gather(it));
        }
        Ok(IterateMatrix::new(samples, uv, columns))
    }

    pub fn rows(&self) -> usize {
        self.samples.len()
    }

    pub fn depth(&self) -> usize {
        self.columns.len().saturating_sub(1)
    }

    fn require(&self, k: usize) -> Result<(), ChenTypeError> {
        if self.depth() < k {
            Err(ChenTypeError::MissingColumns {
                needed: k,
                have: self.depth(),
            })
        } else {
            Ok(())
        }
    }

    /// Root-mean-square magnitude over all rows and components of column k.
    pub fn column_rms(&self, k: usize) -> f64 {
        let col = &self.columns[k];
        let sum: f64 = col
            .iter()
            .map(|v| v[0] * v[0] + v[1] * v[1] + v[2] * v[2])
            .sum();
        (sum / (3.0 * col.len() as f64)).sqrt()
    }

    /// Audit dump, one row per sample: `u,v` then the iterate components.
    pub fn write_csv<W: std::io::Write>(&self, w: &mut W) -> std::io::Result<()> {
        let mut header = String::from("u,v");
        for k in 0..self.columns.len() {
            for comp in ["x", "y", "z"] {
                header.push_str(&format!(",y{k}{comp}"));
            }
        }
        writeln!(w, "{header}")?;
        for row in 0..self.rows() {
            let (u, v) = self.uv[row];
            let mut line = format!("{u},{v}");
            for col in &self.columns {
                for component in &col[row] {
                    line.push_str(&format!(",{component}"));
                }
            }
            writeln!(w, "{line}")?;
        }
        Ok(())
    }
}

/// Result of fitting `y1 = lambda (y0 - c)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EigenFit {
    pub lambda: f64,
    pub center: [f64; 3],
    pub residual: f64,
    pub samples: usize,
}

/// Result of fitting `y_k + sigma_1 y_{k-1} + ... + sigma_k (y_0 - c) = 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RelationFit {
    pub k: usize,
    pub sigma: Vec<f64>,
    pub center: [f64; 3],
    pub residual: f64,
    pub rank_deficient: bool,
    pub samples: usize,
}

/// Result of fitting `y1 = A y0` on absolute coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixFit {
    pub a: [[f64; 3]; 3],
    pub residual: f64,
    pub samples: usize,
}

const DESIGN_RANK_EPS: f64 = 1e-12;

fn solve_least_squares(
    m: DMatrix<f64>,
    rhs: DVector<f64>,
) -> Result<(DVector<f64>, DVector<f64>, bool), ChenTypeError> {
    let svd = m.clone().svd(true, true);
    let smax = svd.singular_values.max();
    if smax == 0.0 {
        return Err(ChenTypeError::DegenerateInput(
            "all-zero design matrix".into(),
        ));
    }
    let deficient = svd.singular_values.min() < DESIGN_RANK_EPS * smax;
    let solution = svd
        .solve(&rhs, DESIGN_RANK_EPS * smax)
        .map_err(|e| ChenTypeError::DegenerateInput(e.to_string()))?;
    let fitted = m * &solution;
    Ok((solution, rhs - fitted, deficient))
}

/// Fits the single-eigenvalue relation over columns y0, y1.
pub fn eigen_fit(iterates: &IterateMatrix) -> Result<EigenFit, ChenTypeError> {
    iterates.require(1)?;
    let n = iterates.rows();
    let y0 = &iterates.columns[0];
    let y1 = &iterates.columns[1];

    let mut mean = [0.0; 3];
    for v in y0 {
        for c in 0..3 {
            mean[c] += v[c];
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let spread: f64 = y0
        .iter()
        .map(|v| (0..3).map(|c| (v[c] - mean[c]).powi(2)).sum::<f64>())
        .sum::<f64>()
        .sqrt();
    let y0_rms = iterates.column_rms(0);
    if spread < 1e-12 * (1.0 + y0_rms) * (n as f64).sqrt() {
        return Err(ChenTypeError::DegenerateInput(
            "position column is constant; no eigen relation is identifiable".into(),
        ));
    }

    // Unknowns (lambda, d0, d1, d2) in the model y1 = lambda*y0 - d.
    let mut m = DMatrix::zeros(3 * n, 4);
    let mut rhs = DVector::zeros(3 * n);
    for (i, (a, b)) in y0.iter().zip(y1).enumerate() {
        for c in 0..3 {
            let row = 3 * i + c;
            m[(row, 0)] = a[c];
            m[(row, 1 + c)] = -1.0;
            rhs[row] = b[c];
        }
    }
    let (u, residual_vec, _) = solve_least_squares(m, rhs)?;
    let lambda = u[0];
    let d = [u[1], u[2], u[3]];
    let center = if lambda.abs() > 1e-8 {
        [d[0] / lambda, d[1] / lambda, d[2] / lambda]
    } else {
        [0.0; 3]
    };
    let denom = (iterates.column_rms(1) * (3.0 * n as f64).sqrt())
        .max(spread)
        .max(f64::MIN_POSITIVE);
    Ok(EigenFit {
        lambda,
        center,
        residual: residual_vec.norm() / denom,
        samples: n,
    })
}

/// Fits the monic degree-k relation with translation term.
pub fn minimal_relation(iterates: &IterateMatrix, k: usize) -> Result<RelationFit, ChenTypeError> {
    if k == 0 {
        return Err(ChenTypeError::DegenerateInput(
            "relation degree must be positive".into(),
        ));
    }
    iterates.require(k)?;
    let n = iterates.rows();

    // Unknowns (sigma_1 .. sigma_k, d0, d1, d2) in the model
    // y_k = -sigma_1 y_{k-1} - ... - sigma_k y_0 + d, where d = sigma_k c.
    let mut m = DMatrix::zeros(3 * n, k + 3);
    let mut rhs = DVector::zeros(3 * n);
    for i in 0..n {
        for c in 0..3 {
            let row = 3 * i + c;
            for j in 1..=k {
                m[(row, j - 1)] = -iterates.columns[k - j][i][c];
            }
            m[(row, k + c)] = 1.0;
            rhs[row] = iterates.columns[k][i][c];
        }
    }
    let (u, residual_vec, deficient) = solve_least_squares(m, rhs)?;
    let sigma: Vec<f64> = (0..k).map(|j| u[j]).collect();
    let sigma_k = sigma[k - 1];
    let center = if sigma_k.abs() > 1e-8 {
        [u[k] / sigma_k, u[k + 1] / sigma_k, u[k + 2] / sigma_k]
    } else {
        [0.0; 3]
    };
    let denom = (iterates.column_rms(k) * (3.0 * n as f64).sqrt()).max(f64::MIN_POSITIVE);
    Ok(RelationFit {
        k,
        sigma,
        center,
        residual: residual_vec.norm() / denom,
        rank_deficient: deficient,
        samples: n,
    })
}

/// Fits `y1 = A y0` with A acting on absolute coordinates (no centering).
pub fn matrix_fit(iterates: &IterateMatrix) -> Result<MatrixFit, ChenTypeError> {
    iterates.require(1)?;
    let n = iterates.rows();
    let y0 = &iterates.columns[0];
    let y1 = &iterates.columns[1];

    let mut g00 = Matrix3::zeros();
    let mut g10 = Matrix3::zeros();
    for (a, b) in y0.iter().zip(y1) {
        let va = Vector3::new(a[0], a[1], a[2]);
        let vb = Vector3::new(b[0], b[1], b[2]);
        g00 += va * va.transpose();
        g10 += vb * va.transpose();
    }
    let a_mat = match g00.try_inverse() {
        Some(inv) => g10 * inv,
        None => {
            let svd = g00.svd(true, true);
            let pinv = svd
                .pseudo_inverse(DESIGN_RANK_EPS * svd.singular_values.max())
                .map_err(|e| ChenTypeError::DegenerateInput(e.to_string()))?;
            g10 * pinv
        }
    };

    let mut num = 0.0;
    for (a, b) in y0.iter().zip(y1) {
        let va = Vector3::new(a[0], a[1], a[2]);
        let vb = Vector3::new(b[0], b[1], b[2]);
        num += (vb - a_mat * va).norm_squared();
    }
    let denom = ((iterates.column_rms(1).max(iterates.column_rms(0))) * (3.0 * n as f64).sqrt())
        .max(f64::MIN_POSITIVE);
    let mut a = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            a[r][c] = a_mat[(r, c)];
        }
    }
    Ok(MatrixFit {
        a,
        residual: num.sqrt() / denom,
        samples: n,
    })
}
