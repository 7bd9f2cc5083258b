//! Numerical Jordan canonical form with eigenvalue clustering.
//!
//! Eigenvalues come from a complex Schur decomposition and are clustered within
//! `tol`. For each cluster the block sizes follow from the nullities of
//! `(M - λ)^j`, and Jordan chains are grown from vectors of `ker (M - λ)^k` that
//! are independent of `ker (M - λ)^{k-1}` and of the chains already chosen.
//! The result is always checked by reconstructing `P J P⁻¹`.

use nalgebra::{DMatrix, DVector, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

pub const DEFAULT_TOL: f64 = 1e-8;
/// Reconstruction error above which the decomposition is rejected.
pub const FAIL_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JordanBlock {
    pub eigenvalue: Complex64,
    pub size: usize,
}

#[derive(Clone, Debug)]
pub struct JordanData {
    /// Columns are Jordan chains, `M = P J P⁻¹`.
    pub p: CMatrix,
    pub blocks: Vec<JordanBlock>,
    pub tol: f64,
    /// `‖P J P⁻¹ - M‖_F / max(1, ‖M‖_F)`.
    pub reconstruction_error: f64,
}

impl JordanData {
    pub fn dim(&self) -> usize {
        self.p.nrows()
    }

    /// Upper-triangular Jordan matrix (eigenvalue on the diagonal, ones above).
    pub fn jordan_matrix(&self) -> CMatrix {
        let n = self.dim();
        let mut j = CMatrix::zeros(n, n);
        let mut off = 0;
        for b in &self.blocks {
            for i in 0..b.size {
                j[(off + i, off + i)] = b.eigenvalue;
                if i + 1 < b.size {
                    j[(off + i, off + i + 1)] = Complex64::new(1.0, 0.0);
                }
            }
            off += b.size;
        }
        j
    }

    pub fn is_diagonal(&self) -> bool {
        self.blocks.iter().all(|b| b.size == 1)
    }

    /// Eigenvalue attached to each column of `P`.
    pub fn column_eigenvalues(&self) -> Vec<Complex64> {
        self.blocks
            .iter()
            .flat_map(|b| std::iter::repeat_n(b.eigenvalue, b.size))
            .collect()
    }

    /// Index range of the columns belonging to each block.
    pub fn block_ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut off = 0;
        self.blocks
            .iter()
            .map(|b| {
                let r = off..off + b.size;
                off += b.size;
                r
            })
            .collect()
    }

    /// Rescales each chain so that the entry of largest modulus in its top
    /// (eigen)vector is real and positive and equal to one. Keeps `P J P⁻¹`.
    pub fn normalize_columns(&mut self) {
        for range in self.block_ranges() {
            let head = self.p.column(range.start).clone_owned();
            let mut best = 0;
            for i in 0..head.len() {
                if head[i].norm() > head[best].norm() * (1.0 + 1e-9) {
                    best = i;
                }
            }
            let scale = head[best];
            if scale.norm() == 0.0 {
                continue;
            }
            for col in range {
                let c = self.p.column(col).map(|z| z / scale);
                self.p.set_column(col, &c);
            }
        }
    }
}

fn frob(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues via complex Schur form.
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let (_, t) = Schur::new(m.clone()).unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Orthonormal basis of the (numerical) null space.
fn null_space(m: &CMatrix, tol: f64) -> Vec<DVector<Complex64>> {
    let n = m.ncols();
    let svd = m.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let thr = tol * smax.max(1.0);
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    for (i, &sv) in svd.singular_values.iter().enumerate() {
        if sv <= thr {
            basis.push(v_t.row(i).adjoint());
        }
    }
    // nalgebra returns min(nrows, ncols) singular values; square here
    debug_assert_eq!(svd.singular_values.len(), n);
    basis
}

fn rank_of(vectors: &[DVector<Complex64>], tol: f64) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let m = CMatrix::from_columns(vectors);
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0_f64, f64::max);
    sv.iter().filter(|&&s| s > tol * smax.max(1e-300)).count()
}

/// Groups eigenvalues, largest groups first. A candidate group is the `k`
/// nearest neighbours of some eigenvalue; it is accepted when its diameter is
/// within `tol` or within the spread `(64 ε ‖M‖)^{1/k}` that rounding produces
/// for an eigenvalue of a Jordan block of size `k`.
fn cluster(eigs: &[Complex64], tol: f64, scale: f64) -> Vec<(Complex64, usize)> {
    let radius = |k: usize| tol.max((64.0 * f64::EPSILON * scale.max(1.0)).powf(1.0 / k as f64));
    let mut left: Vec<Complex64> = eigs.to_vec();
    let mut out = Vec::new();
    while !left.is_empty() {
        let mut found: Option<Vec<usize>> = None;
        'size: for k in (1..=left.len()).rev() {
            for &centre in &left {
                let mut idx: Vec<usize> = (0..left.len()).collect();
                idx.sort_by(|&a, &b| (left[a] - centre).norm().total_cmp(&(left[b] - centre).norm()));
                idx.truncate(k);
                let diameter = idx
                    .iter()
                    .flat_map(|&a| idx.iter().map(move |&b| (a, b)))
                    .map(|(a, b)| (left[a] - left[b]).norm())
                    .fold(0.0, f64::max);
                if diameter <= radius(k) {
                    found = Some(idx);
                    break 'size;
                }
            }
        }
        let mut idx = found.expect("singletons always qualify");
        idx.sort_unstable_by(|a, b| b.cmp(a));
        let members: Vec<Complex64> = idx.iter().map(|&i| left.remove(i)).collect();
        out.push((members.iter().sum::<Complex64>() / members.len() as f64, members.len()));
    }
    out
}

pub fn jordan_form(m: &CMatrix, tol: f64) -> Result<JordanData> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Dimension(format!("matrix is {}x{}, not square", n, m.ncols())));
    }
    let ident = CMatrix::identity(n, n);
    let mut columns: Vec<DVector<Complex64>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();

    for (lambda, alg_mult) in cluster(&eigenvalues(m), tol, frob(m)) {
        let shifted = m - &ident * lambda;
        // nullities of N^j, j = 0..
        let mut powers = vec![ident.clone()];
        let mut kernels: Vec<Vec<DVector<Complex64>>> = vec![Vec::new()];
        loop {
            let next = &shifted * powers.last().expect("nonempty");
            let ker = null_space(&next, tol);
            let done = ker.len() >= alg_mult || ker.len() == kernels.last().map_or(0, |k| k.len());
            powers.push(next);
            kernels.push(ker);
            if done || powers.len() > alg_mult + 1 {
                break;
            }
        }
        let nullity: Vec<usize> = kernels.iter().map(|k| k.len().min(alg_mult)).collect();
        let depth = nullity.len() - 1;
        // at_least[k] = number of blocks of size >= k
        let at_least = |k: usize| -> usize {
            if k == 0 || k > depth {
                0
            } else {
                nullity[k].saturating_sub(nullity[k - 1])
            }
        };

        // chains[i] = vectors [N^{size-1} v, ..., N v, v]
        let mut chains: Vec<Vec<DVector<Complex64>>> = Vec::new();
        for k in (1..=depth).rev() {
            let wanted = at_least(k).saturating_sub(at_least(k + 1));
            if wanted == 0 {
                continue;
            }
            let mut span: Vec<DVector<Complex64>> = kernels[k - 1].clone();
            for ch in &chains {
                // vector of height exactly k in a longer chain
                span.push(ch[k - 1].clone());
            }
            let mut r = rank_of(&span, tol);
            let mut chosen = 0;
            for cand in &kernels[k] {
                if chosen == wanted {
                    break;
                }
                span.push(cand.clone());
                let r2 = rank_of(&span, tol);
                if r2 > r {
                    r = r2;
                    chosen += 1;
                    let mut chain = vec![cand.clone()];
                    for _ in 1..k {
                        let next = &shifted * chain.last().expect("nonempty");
                        chain.push(next);
                    }
                    chain.reverse();
                    chains.push(chain);
                } else {
                    span.pop();
                }
            }
        }
        chains.sort_by_key(|c| std::cmp::Reverse(c.len()));
        for ch in chains {
            blocks.push(JordanBlock { eigenvalue: lambda, size: ch.len() });
            columns.extend(ch);
        }
    }

    if columns.len() != n {
        return Err(Error::IllConditioned(f64::INFINITY));
    }
    let p = CMatrix::from_columns(&columns);
    let mut data = JordanData { p, blocks, tol, reconstruction_error: f64::INFINITY };
    data.normalize_columns();
    let err = match data.p.clone().try_inverse() {
        Some(pinv) => frob(&(&data.p * data.jordan_matrix() * pinv - m)) / frob(m).max(1.0),
        None => f64::INFINITY,
    };
    data.reconstruction_error = err;
    if !(err <= FAIL_TOL) {
        return Err(Error::IllConditioned(err));
    }
    Ok(data)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(rows: &[&[f64]]) -> CMatrix {
        let n = rows.len();
        CMatrix::from_fn(n, rows[0].len(), |i, j| c(rows[i][j], 0.0))
    }

    fn sizes(d: &JordanData) -> Vec<usize> {
        let mut s: Vec<_> = d.blocks.iter().map(|b| b.size).collect();
        s.sort();
        s
    }

    #[test]
    fn diagonal_matrix() {
        let d = jordan_form(&real(&[&[2.0, 0.0], &[0.0, 3.0]]), DEFAULT_TOL).unwrap();
        assert_eq!(sizes(&d), vec![1, 1]);
        let mut eig: Vec<f64> = d.blocks.iter().map(|b| b.eigenvalue.re).collect();
        eig.sort_by(f64::total_cmp);
        assert_eq!(eig, vec![2.0, 3.0]);
        assert!(d.reconstruction_error < 1e-14);
        // normalized eigenvectors of a diagonal matrix are the unit vectors
        for j in 0..2 {
            assert_eq!(d.p.column(j).iter().filter(|z| z.norm() > 1e-14).count(), 1);
        }
    }

    #[test]
    fn canonical_block() {
        let d = jordan_form(&real(&[&[1.0, 1.0], &[0.0, 1.0]]), DEFAULT_TOL).unwrap();
        assert_eq!(d.blocks.len(), 1);
        assert_eq!(d.blocks[0].size, 2);
        assert!((d.blocks[0].eigenvalue - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation() {
        let d = jordan_form(&real(&[&[0.0, 1.0], &[-1.0, 0.0]]), DEFAULT_TOL).unwrap();
        assert_eq!(sizes(&d), vec![1, 1]);
        let mut ims: Vec<f64> = d.blocks.iter().map(|b| b.eigenvalue.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn mixed_blocks_same_eigenvalue() {
        // J_3(2) ⊕ J_1(2) ⊕ J_2(5), conjugated by a fixed invertible matrix
        let mut j = CMatrix::zeros(6, 6);
        for i in 0..4 {
            j[(i, i)] = c(2.0, 0.0);
        }
        j[(0, 1)] = c(1.0, 0.0);
        j[(1, 2)] = c(1.0, 0.0);
        j[(4, 4)] = c(5.0, 0.0);
        j[(5, 5)] = c(5.0, 0.0);
        j[(4, 5)] = c(1.0, 0.0);
        let q = CMatrix::from_fn(6, 6, |r, s| if r == s { c(2.0, 0.0) } else { c(((r + 2 * s) % 3) as f64 * 0.25, 0.0) });
        let m = &q * &j * q.clone().try_inverse().unwrap();
        let d = jordan_form(&m, DEFAULT_TOL).unwrap();
        assert_eq!(sizes(&d), vec![1, 2, 3]);
        assert!(d.reconstruction_error < 1e-7);
    }

    #[test]
    fn unipotent_sym2() {
        let m = real(&[&[1.0, 1.0, 1.0], &[0.0, 1.0, 2.0], &[0.0, 0.0, 1.0]]);
        let d = jordan_form(&m, DEFAULT_TOL).unwrap();
        assert_eq!(sizes(&d), vec![3]);
        let pinv = d.p.clone().try_inverse().unwrap();
        let back = &d.p * d.jordan_matrix() * pinv;
        assert!((back - m).iter().all(|z| z.norm() < 1e-7));
    }

    #[test]
    fn rejects_non_square() {
        assert!(jordan_form(&CMatrix::zeros(2, 3), DEFAULT_TOL).is_err());
    }
}
