//! Dense brute-force reference computations.
//!
//! Everything here works on plain slices and `nalgebra` matrices and never
//! touches the `isingnet` types, so it stays independent of the code paths
//! it checks. None of it scales past a handful of spins.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// `−(J/2) Σ_ij A_ij σ_i σ_j − h Σ_i σ_i` by explicit double sum.
pub fn ising_energy_double_sum(adjacency: &[Vec<u8>], spins: &[i32], coupling: f64, field: f64) -> f64 {
    let n = spins.len();
    let mut pair = 0.0;
    for i in 0..n {
        for j in 0..n {
            pair += f64::from(adjacency[i][j]) * f64::from(spins[i] * spins[j]);
        }
    }
    let sum: i32 = spins.iter().sum();
    -0.5 * coupling * pair - field * f64::from(sum)
}

/// Per-node raising and lowering jump operators
/// `L_{n,±} = Σ_a √γ(a → a⊕n) |a⊕n⟩⟨a|`, restricted to the `a` whose bit
/// `n` is 0 (raising) or 1 (lowering).
pub fn node_jump_operators(n_spins: usize, rate: impl Fn(usize, usize) -> f64) -> Vec<CMatrix> {
    let dim = 1usize << n_spins;
    let mut ops = Vec::new();
    for node in 0..n_spins {
        for raising in [true, false] {
            let mut l = CMatrix::zeros(dim, dim);
            for a in 0..dim {
                let bit_set = (a >> node) & 1 == 1;
                if bit_set == raising {
                    continue;
                }
                let b = a ^ (1 << node);
                l[(b, a)] = Complex64::new(rate(a, b).sqrt(), 0.0);
            }
            ops.push(l);
        }
    }
    ops
}

/// Full `dim² × dim²` Lindblad superoperator acting on column-stacked
/// `vec(ρ)`, built with `vec(AXB) = (Bᵀ ⊗ A) vec(X)`.
pub fn dense_lindbladian(energies: &[f64], jumps: &[CMatrix]) -> CMatrix {
    let dim = energies.len();
    let id = CMatrix::identity(dim, dim);
    let h = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        energies.iter().map(|&e| Complex64::new(e, 0.0)),
    ));
    let minus_i = Complex64::new(0.0, -1.0);
    let mut s = (id.kronecker(&h) - h.transpose().kronecker(&id)) * minus_i;
    for l in jumps {
        let ldl = l.adjoint() * l;
        s += l.conjugate().kronecker(l);
        s -= id.kronecker(&ldl) * Complex64::new(0.5, 0.0);
        s -= ldl.transpose().kronecker(&id) * Complex64::new(0.5, 0.0);
    }
    s
}

/// Applies a column-stacked superoperator to a row-major density matrix.
pub fn apply_superoperator(s: &CMatrix, rho_row_major: &[Complex64], dim: usize) -> Vec<Complex64> {
    let mut v = nalgebra::DVector::zeros(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            v[c * dim + r] = rho_row_major[r * dim + c];
        }
    }
    let out = s * v;
    let mut res = vec![Complex64::new(0.0, 0.0); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            res[r * dim + c] = out[c * dim + r];
        }
    }
    res
}

/// `exp(W t) p0` for a real generator given row-major.
pub fn expm_apply(w_row_major: &[f64], dim: usize, t: f64, p0: &[f64]) -> Vec<f64> {
    let w = DMatrix::from_row_slice(dim, dim, w_row_major) * t;
    let e = w.exp();
    let p = nalgebra::DVector::from_column_slice(p0);
    (e * p).iter().copied().collect()
}

/// Normalized null vector of a real generator (stationary distribution),
/// from the right singular vector of the smallest singular value.
pub fn stationary_vector(w_row_major: &[f64], dim: usize) -> Vec<f64> {
    let w = DMatrix::from_row_slice(dim, dim, w_row_major);
    let svd = w.svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty");
    let row: Vec<f64> = v_t.row(k).iter().copied().collect();
    let total: f64 = row.iter().sum();
    row.iter().map(|x| x / total).collect()
}

/// Deterministic pseudo-random Hermitian, positive, unit-trace matrix
/// (row-major), from a simple LCG so the oracle carries no RNG dependency.
pub fn random_density_matrix(dim: usize, seed: u64) -> Vec<Complex64> {
    let mut state = seed.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1);
    let mut next = move || {
        state = state
            .wrapping_mul(6_364_136_223_846_793_005)
            .wrapping_add(1_442_695_040_888_963_407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let a = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(next(), next()));
    let rho = &a * a.adjoint();
    let tr = rho.trace();
    let rho = rho / tr;
    let mut out = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            out.push(rho[(r, c)]);
        }
    }
    out
}

/// Slowest nonzero relaxation rate of a detailed-balance generator: the
/// smallest `|λ| > zero_tol` of `D^{-1/2} W D^{1/2}` with `D = diag(π)`,
/// which is symmetric and shares the spectrum of `W`.
pub fn relaxation_gap(w_row_major: &[f64], dim: usize, zero_tol: f64) -> f64 {
    let pi = stationary_vector(w_row_major, dim);
    let s = DMatrix::from_fn(dim, dim, |i, j| {
        let v = w_row_major[i * dim + j] * (pi[j] / pi[i]).sqrt();
        let t = w_row_major[j * dim + i] * (pi[i] / pi[j]).sqrt();
        0.5 * (v + t)
    });
    s.symmetric_eigenvalues()
        .iter()
        .map(|l| l.abs())
        .filter(|&r| r > zero_tol)
        .fold(f64::INFINITY, f64::min)
}

/// Binomial coefficient as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expm_of_two_state_chain() {
        // 0 -> 1 at rate a, 1 -> 0 at rate b.
        let (a, b, t) = (0.7, 0.3, 1.9);
        let w = [-a, b, a, -b];
        let p = expm_apply(&w, 2, t, &[1.0, 0.0]);
        let p1 = a / (a + b) * (1.0 - (-(a + b) * t).exp());
        assert!((p[1] - p1).abs() < 1e-14);
        let s = stationary_vector(&w, 2);
        assert!((s[0] - b / (a + b)).abs() < 1e-14);
        assert!((relaxation_gap(&w, 2, 1e-12) - (a + b)).abs() < 1e-14);
    }

    #[test]
    fn superoperator_of_decay_preserves_trace() {
        let jumps = node_jump_operators(1, |a, _| if a == 1 { 0.5 } else { 0.2 });
        let s = dense_lindbladian(&[0.0, 1.0], &jumps);
        let rho = random_density_matrix(2, 3);
        let d = apply_superoperator(&s, &rho, 2);
        assert!((d[0] + d[3]).norm() < 1e-15);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6.0);
        assert_eq!(binomial(7, 0), 1.0);
    }
}
