//! Empirical IDS of the planar magnetic Laplacian by eigenvalue counting.
//!
//! H_B = −¼[(∂ₓ + iBy)² + (∂_y − iBx)²] − ½ is discretized on the N×N
//! interior points of [−L, L]² with Dirichlet boundary, mesh h = 2L/(N+1).
//! Eigenvalues below λ are counted from the inertia of H − λ, read off the
//! pivots of a banded LDLᴴ factorization, so no eigenvector is ever formed.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Discretization of the covariant derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    /// Link phases: (∂ₓ + iBy)²ψ ≈ [e^{iByh}ψ(x+h) − 2ψ + e^{−iByh}ψ(x−h)]/h².
    /// Gauge covariant; exact Landau degeneracy is approached at every B·h.
    #[default]
    Peierls,
    /// Expanded form ∂ₓ² + 2iBy∂ₓ − B²y² with central first and second differences.
    CentralDifference,
}

/// The square [−L, L]², N interior points per axis, field strength B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub half_width: f64,
    pub points_per_axis: usize,
    pub field: f64,
    #[serde(default)]
    pub stencil: Stencil,
}

impl GridSpec {
    pub fn new(half_width: f64, points_per_axis: usize, field: f64) -> Result<Self> {
        let spec = Self {
            half_width,
            points_per_axis,
            field,
            stencil: Stencil::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 8 {
            return Err(Error::GridTooSmall {
                points: self.points_per_axis,
            });
        }
        if !(self.half_width > 0.0) || !self.half_width.is_finite() {
            return Err(Error::InvalidSpec(format!("half width L = {} must be > 0", self.half_width)));
        }
        if !(self.field > 0.0) || !self.field.is_finite() {
            return Err(Error::InvalidSpec(format!("field B = {} must be > 0", self.field)));
        }
        Ok(())
    }

    /// h = 2L/(N+1).
    pub fn mesh(&self) -> f64 {
        2.0 * self.half_width / (self.points_per_axis as f64 + 1.0)
    }

    /// (2L)².
    pub fn volume(&self) -> f64 {
        4.0 * self.half_width * self.half_width
    }

    /// Coordinate of interior grid index i.
    pub fn coordinate(&self, i: usize) -> f64 {
        -self.half_width + (i as f64 + 1.0) * self.mesh()
    }
}

/// A sparse Hermitian matrix in compressed-row form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseHermitian {
    dim: usize,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<Complex64>,
}

impl SparseHermitian {
    /// Builds the matrix from (row, column, value) entries; duplicates are
    /// summed. Fails unless entry(i, j) = conj(entry(j, i)) exactly.
    pub fn from_triplets(dim: usize, mut triplets: Vec<(usize, usize, Complex64)>) -> Result<Self> {
        if let Some(&(i, j, _)) = triplets.iter().find(|&&(i, j, _)| i >= dim || j >= dim) {
            return Err(Error::InvalidSpec(format!("entry ({i}, {j}) outside a {dim}×{dim} matrix")));
        }
        triplets.sort_by_key(|&(i, j, _)| (i, j));
        let mut row_start = vec![0; dim + 1];
        let mut cols = Vec::with_capacity(triplets.len());
        let mut values: Vec<Complex64> = Vec::with_capacity(triplets.len());
        let mut last = None;
        for (i, j, v) in triplets {
            if last == Some((i, j)) {
                *values.last_mut().expect("previous entry exists") += v;
                continue;
            }
            last = Some((i, j));
            row_start[i + 1] += 1;
            cols.push(j);
            values.push(v);
        }
        for i in 0..dim {
            row_start[i + 1] += row_start[i];
        }
        let matrix = Self {
            dim,
            row_start,
            cols,
            values,
        };
        if let Some((i, j)) = matrix.hermiticity_violation() {
            return Err(Error::InvalidSpec(format!("matrix is not Hermitian at ({i}, {j})")));
        }
        Ok(matrix)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries of row i as (column, value).
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, Complex64)> + '_ {
        let range = self.row_start[i]..self.row_start[i + 1];
        self.cols[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let range = self.row_start[i]..self.row_start[i + 1];
        match self.cols[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => Complex64::new(0.0, 0.0),
        }
    }

    /// max |i − j| over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.dim)
            .flat_map(|i| self.row(i).map(move |(j, _)| i.abs_diff(j)))
            .max()
            .unwrap_or(0)
    }

    fn hermiticity_violation(&self) -> Option<(usize, usize)> {
        (0..self.dim).find_map(|i| {
            self.row(i)
                .find(|&(j, v)| self.entry(j, i) != v.conj())
                .map(|(j, _)| (i, j))
        })
    }

    /// Row-major dense copy, for small matrices.
    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let mut dense = vec![vec![Complex64::new(0.0, 0.0); self.dim]; self.dim];
        for (i, row) in dense.iter_mut().enumerate() {
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        dense
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let mut center = 0.0;
            let mut radius = 0.0;
            for (j, v) in self.row(i) {
                if j == i {
                    center = v.re;
                } else {
                    radius += v.norm();
                }
            }
            lo = lo.min(center - radius);
            hi = hi.max(center + radius);
        }
        (lo, hi)
    }
}

/// The discretized Hamiltonian together with its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteHamiltonian {
    pub grid: GridSpec,
    pub matrix: SparseHermitian,
}

impl DiscreteHamiltonian {
    pub fn count_below(&self, lambda: f64) -> Result<usize> {
        count_eigenvalues_below(&self.matrix, lambda)
    }
}

/// Assembles H_B on the grid; unknowns are ordered with x fastest.
pub fn discretize_magnetic_hamiltonian(grid: &GridSpec) -> Result<DiscreteHamiltonian> {
    grid.validate()?;
    let n = grid.points_per_axis;
    let h = grid.mesh();
    let b = grid.field;
    let hop = 1.0 / (4.0 * h * h);
    let index = |ix: usize, iy: usize| iy * n + ix;
    let mut triplets = Vec::with_capacity(5 * n * n);
    for iy in 0..n {
        let y = grid.coordinate(iy);
        for ix in 0..n {
            let x = grid.coordinate(ix);
            let i = index(ix, iy);
            // Links to the +x and +y neighbours; the −x, −y links are their adjoints.
            let (diag, x_link, y_link) = match grid.stencil {
                Stencil::Peierls => (
                    4.0 * hop - 0.5,
                    -hop * Complex64::from_polar(1.0, b * y * h),
                    -hop * Complex64::from_polar(1.0, -b * x * h),
                ),
                Stencil::CentralDifference => (
                    4.0 * hop + 0.25 * b * b * (x * x + y * y) - 0.5,
                    -hop * Complex64::new(1.0, b * y * h),
                    -hop * Complex64::new(1.0, -b * x * h),
                ),
            };
            triplets.push((i, i, Complex64::new(diag, 0.0)));
            if ix + 1 < n {
                let j = index(ix + 1, iy);
                triplets.push((i, j, x_link));
                triplets.push((j, i, x_link.conj()));
            }
            if iy + 1 < n {
                let j = index(ix, iy + 1);
                triplets.push((i, j, y_link));
                triplets.push((j, i, y_link.conj()));
            }
        }
    }
    Ok(DiscreteHamiltonian {
        grid: *grid,
        matrix: SparseHermitian::from_triplets(n * n, triplets)?,
    })
}

/// Pivots below this fraction of the largest diagonal entry of H − λ are
/// treated as zero.
const PIVOT_TOLERANCE: f64 = 1e-12;
/// Shift suggested when λ sits on the spectrum.
pub const SHIFT_NUDGE: f64 = 1e-9;

/// ♯{eigenvalues of `matrix` strictly below λ}.
///
/// By Sylvester's law of inertia this is the number of negative pivots D_k
/// of H − λ = L D Lᴴ. The factorization is banded and unpivoted, and keeps
/// only a window of bandwidth + 1 rows in memory.
pub fn count_eigenvalues_below(matrix: &SparseHermitian, lambda: f64) -> Result<usize> {
    if !lambda.is_finite() {
        return Err(Error::InvalidSpec(format!("shift λ = {lambda} must be finite")));
    }
    let dim = matrix.dim();
    if dim == 0 {
        return Ok(0);
    }
    let band = matrix.bandwidth();
    let slots = band + 1;
    let scale = (0..dim)
        .map(|i| (matrix.entry(i, i).re - lambda).abs())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);

    // window[r % slots][band − (r − c)] holds entry (r, c) of the partially
    // eliminated lower band, c ∈ [r − band, r].
    let mut window = vec![vec![Complex64::new(0.0, 0.0); slots]; slots];
    let load = |window: &mut Vec<Vec<Complex64>>, r: usize| {
        let row = &mut window[r % slots];
        row.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (c, v) in matrix.row(r) {
            if c <= r {
                row[band - (r - c)] = if c == r { v - lambda } else { v };
            }
        }
    };
    for r in 0..slots.min(dim) {
        load(&mut window, r);
    }

    let mut negative = 0;
    let mut multipliers = vec![Complex64::new(0.0, 0.0); band];
    for k in 0..dim {
        let pivot = window[k % slots][band].re;
        if pivot.abs() <= PIVOT_TOLERANCE * scale {
            return Err(Error::SingularShift {
                lambda,
                pivot,
                suggested_nudge: SHIFT_NUDGE,
            });
        }
        if pivot < 0.0 {
            negative += 1;
        }
        let reach = band.min(dim - 1 - k);
        for (s, m) in multipliers.iter_mut().enumerate().take(reach) {
            let r = k + 1 + s;
            *m = window[r % slots][band - (r - k)];
        }
        // Row r −= (l_r D) conj(l_c) for c ∈ (k, r], with l = column k / D.
        for s in 0..reach {
            let r = k + 1 + s;
            let lr = multipliers[s] / pivot;
            let row = &mut window[r % slots];
            for (t, m) in multipliers.iter().enumerate().take(s + 1) {
                let c = k + 1 + t;
                row[band - (r - c)] -= lr * m.conj();
            }
        }
        if k + slots < dim {
            load(&mut window, k + slots);
        }
    }
    Ok(negative)
}

/// One row of an eigenvalue count on a grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub half_width: f64,
    pub points_per_axis: usize,
    pub mesh: f64,
    pub lambda: f64,
    pub count: usize,
    pub volume: f64,
    pub empirical_ids: f64,
}

/// ♯{λ_j < λ}/(2L)² for the discretized H_B.
pub fn empirical_ids(grid: &GridSpec, lambda: f64) -> Result<CountResult> {
    let h = discretize_magnetic_hamiltonian(grid)?;
    let count = h.count_below(lambda)?;
    Ok(CountResult {
        half_width: grid.half_width,
        points_per_axis: grid.points_per_axis,
        mesh: grid.mesh(),
        lambda,
        count,
        volume: grid.volume(),
        empirical_ids: count as f64 / grid.volume(),
    })
}

/// Infinite-volume IDS of the planar H_B: Landau levels B(k + ½) − ½, each
/// carrying B/π states per unit area. At B = 1 this is (1 + ⌊λ⌋)/π.
pub fn landau_ids(field: f64, lambda: f64) -> f64 {
    let lowest = 0.5 * field - 0.5;
    if lambda < lowest {
        return 0.0;
    }
    let levels = ((lambda - lowest) / field).floor() + 1.0;
    levels * field / PI
}

/// One row of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StudyRow {
    #[serde(flatten)]
    pub count: CountResult,
    pub closed_form: f64,
    pub rel_error: f64,
}

/// Empirical IDS for each (L, N), in the given order, against [`landau_ids`].
/// The grids are counted concurrently.
pub fn convergence_study(
    field: f64,
    lambda: f64,
    sizes: &[(f64, usize)],
    stencil: Stencil,
) -> Result<Vec<StudyRow>> {
    let grids = sizes
        .iter()
        .map(|&(l, n)| GridSpec::new(l, n, field).map(|g| g.with_stencil(stencil)))
        .collect::<Result<Vec<_>>>()?;
    let closed = landau_ids(field, lambda);
    let counts: Vec<Result<CountResult>> = std::thread::scope(|scope| {
        let handles: Vec<_> = grids
            .iter()
            .map(|g| scope.spawn(move || empirical_ids(g, lambda)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("counting thread panicked"))
            .collect()
    });
    counts
        .into_iter()
        .map(|c| {
            let count = c?;
            Ok(StudyRow {
                count,
                closed_form: closed,
                rel_error: if closed == 0.0 {
                    count.empirical_ids
                } else {
                    (count.empirical_ids - closed).abs() / closed
                },
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(matches!(GridSpec::new(1.0, 7, 1.0), Err(Error::GridTooSmall { points: 7 })));
        assert!(GridSpec::new(-1.0, 10, 1.0).is_err());
        let g = GridSpec::new(1.0, 9, 1.0).unwrap();
        assert!((g.mesh() - 0.2).abs() < 1e-16);
        assert!((g.coordinate(0) + 0.8).abs() < 1e-15);
    }

    #[test]
    fn assembly_is_hermitian_with_five_point_rows() {
        for stencil in [Stencil::Peierls, Stencil::CentralDifference] {
            let g = GridSpec::new(2.0, 10, 1.3).unwrap().with_stencil(stencil);
            let h = discretize_magnetic_hamiltonian(&g).unwrap();
            let m = &h.matrix;
            assert_eq!(m.dim(), 100);
            assert_eq!(m.bandwidth(), 10);
            for i in 0..m.dim() {
                assert!(m.row(i).count() <= 5);
                for (j, v) in m.row(i) {
                    assert_eq!(m.entry(j, i), v.conj());
                }
            }
        }
    }

    #[test]
    fn triplets_reject_non_hermitian() {
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        assert!(SparseHermitian::from_triplets(2, vec![(0, 1, i), (1, 0, i)]).is_err());
        let m = SparseHermitian::from_triplets(2, vec![(0, 1, i), (1, 0, -i), (0, 0, one), (0, 0, one)]).unwrap();
        assert_eq!(m.entry(0, 0), Complex64::new(2.0, 0.0));
    }

    #[test]
    fn counts_at_gershgorin_extremes() {
        let g = GridSpec::new(2.0, 12, 1.0).unwrap();
        let h = discretize_magnetic_hamiltonian(&g).unwrap();
        let (lo, hi) = h.matrix.gershgorin_bounds();
        assert_eq!(h.count_below(lo - 1.0).unwrap(), 0);
        assert_eq!(h.count_below(hi + 1.0).unwrap(), 144);
    }

    #[test]
    fn diagonal_matrix_counts_and_singular_shift() {
        let triplets = (0..6).map(|i| (i, i, Complex64::new(i as f64, 0.0))).collect();
        let m = SparseHermitian::from_triplets(6, triplets).unwrap();
        assert_eq!(count_eigenvalues_below(&m, 2.5).unwrap(), 3);
        assert!(matches!(count_eigenvalues_below(&m, 2.0), Err(Error::SingularShift { .. })));
        assert_eq!(count_eigenvalues_below(&m, 2.0 + SHIFT_NUDGE).unwrap(), 3);
    }

    #[test]
    fn landau_closed_form() {
        assert!((landau_ids(1.0, 0.5) - 1.0 / PI).abs() < 1e-16);
        assert!((landau_ids(1.0, 1.0) - 2.0 / PI).abs() < 1e-16);
        assert_eq!(landau_ids(1.0, -0.1), 0.0);
        // B = 2: levels at ½, 2½, …, 2/π states per level.
        assert_eq!(landau_ids(2.0, 0.4), 0.0);
        assert!((landau_ids(2.0, 0.6) - 2.0 / PI).abs() < 1e-16);
    }

    #[test]
    fn empty_and_single_studies() {
        assert!(convergence_study(1.0, 0.5, &[], Stencil::Peierls).unwrap().is_empty());
        let rows = convergence_study(1.0, 0.5, &[(2.0, 19)], Stencil::Peierls).unwrap();
        assert_eq!(rows.len(), 1);
    }
}
