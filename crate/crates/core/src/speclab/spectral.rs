use faer::{c64, Mat, Side};

use crate::error::{Error, Result};

use super::rep::Block;

/// Eigendecomposition `h = V diag(lambda) V*` on one block; `k = exp(h/2)`.
#[derive(Clone, Debug)]
pub struct KCalc {
    pub lambda: Vec<f64>,
    pub v: Mat<c64>,
}

fn unitarity_defect(v: &Mat<c64>) -> f64 {
    let g = v.adjoint() * v;
    let mut x: f64 = 0.0;
    for j in 0..g.ncols() {
        for i in 0..g.nrows() {
            let want = if i == j { 1.0 } else { 0.0 };
            x = x.max((g[(i, j)] - c64::new(want, 0.0)).norm());
        }
    }
    x
}

impl KCalc {
    pub fn new(block: &Block) -> Result<Self> {
        let h = block.h_matrix();
        let eig = h
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| Error::Spectral(format!("eigendecomposition of h: {e:?}")))?;
        let lambda: Vec<f64> = (0..block.len()).map(|i| eig.S()[i].re).collect();
        let v = eig.U().to_owned();
        let defect = unitarity_defect(&v);
        if defect > 1e-10 || lambda.iter().any(|x| !x.is_finite()) {
            return Err(Error::Spectral(format!("eigenvectors of h not unitary (defect {defect:e})")));
        }
        Ok(KCalc { lambda, v })
    }

    pub fn len(&self) -> usize {
        self.lambda.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambda.is_empty()
    }

    /// Eigenvalues of `k`.
    pub fn kappa(&self) -> Vec<f64> {
        self.lambda.iter().map(|l| (l / 2.0).exp()).collect()
    }

    /// `k^m = V diag(exp(m lambda / 2)) V*`.
    pub fn kpow(&self, m: f64) -> Mat<c64> {
        let n = self.len();
        let scaled = Mat::<c64>::from_fn(n, n, |i, j| self.v[(i, j)] * (m * self.lambda[j] / 2.0).exp());
        &scaled * self.v.adjoint()
    }

    /// `P = sum_j k^3 D_j k^-2 D_j k^3`, which equals `k (sum D_j^2) k^3 + sum_j k^3 delta_j(k^-2) D_j k^3`.
    pub fn p_matrix(&self, block: &Block) -> Mat<c64> {
        let k3 = self.kpow(3.0);
        let km2 = self.kpow(-2.0);
        let mut p = Mat::<c64>::zeros(self.len(), self.len());
        for j in 0..3 {
            let a = block.grading(j) * &k3;
            p += a.adjoint() * &km2 * &a;
        }
        p
    }
}

/// Eigenvalues of `P` on one block, checked to be real and nonnegative.
pub fn p_spectrum(block: &Block) -> Result<Vec<f64>> {
    let kc = KCalc::new(block)?;
    let p = kc.p_matrix(block);
    let mut herm: f64 = 0.0;
    for j in 0..p.ncols() {
        for i in 0..p.nrows() {
            herm = herm.max((p[(i, j)] - p[(j, i)].conj()).norm());
        }
    }
    let scale = p.norm_l2().max(1.0);
    if herm > 1e-10 * scale {
        return Err(Error::Spectral(format!("P not self-adjoint (defect {herm:e})")));
    }
    let mut ev = p
        .self_adjoint_eigenvalues(Side::Lower)
        .map_err(|e| Error::Spectral(format!("eigenvalues of P: {e:?}")))?;
    if let Some(&lo) = ev.iter().min_by(|a, b| a.total_cmp(b)) {
        if lo < -1e-8 * scale {
            return Err(Error::Spectral(format!("P has negative eigenvalue {lo:e}")));
        }
    }
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}
