use std::collections::HashMap;

use num_traits::Zero;

use super::scalar::{sv_add_scaled, Scalar};

/// Sparse vector: `(index, value)` pairs sorted by index, no zero values.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Column-major sparse matrix over ℚ.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    columns: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMatrix::zero(n, n);
        for (i, col) in m.columns.iter_mut().enumerate() {
            col.push((i, Scalar::from_integer(1.into())));
        }
        m
    }

    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Self {
        let mut m = SparseMatrix::zero(rows, cols);
        for (r, c, v) in entries {
            assert!(r < rows && c < cols, "entry ({r},{c}) out of {rows}x{cols}");
            if !v.is_zero() {
                m.columns[c].push((r, v));
            }
        }
        for col in &mut m.columns {
            col.sort_by_key(|(r, _)| *r);
            // merge duplicates
            let mut merged: SparseVec = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some((lr, lv)) if *lr == r => *lv += v,
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !v.is_zero());
            *col = merged;
        }
        m
    }

    pub fn set_column(&mut self, c: usize, col: SparseVec) {
        debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
        self.columns[c] = col;
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.columns[c]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut m = SparseMatrix::zero(self.cols, self.rows);
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m.columns[*r].push((c, v.clone()));
            }
        }
        // columns were filled in ascending c order, already sorted
        m
    }

    /// Matrix-vector product `self · v`.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: SparseVec = Vec::new();
        for (i, c) in v {
            acc = sv_add_scaled(&acc, &self.columns[*i], c);
        }
        acc
    }

    /// Matrix product `self · other`.
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in compose");
        let mut m = SparseMatrix::zero(self.rows, other.cols);
        for (c, col) in other.columns.iter().enumerate() {
            m.columns[c] = self.apply(col);
        }
        m
    }

    pub fn scaled(&self, c: &Scalar) -> SparseMatrix {
        let mut m = self.clone();
        for col in &mut m.columns {
            if c.is_zero() {
                col.clear();
            } else {
                for (_, v) in col.iter_mut() {
                    *v *= c;
                }
            }
        }
        m
    }

    pub fn add(&self, other: &SparseMatrix) -> SparseMatrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        let mut m = SparseMatrix::zero(self.rows, self.cols);
        let one = Scalar::from_integer(1.into());
        for c in 0..self.cols {
            m.columns[c] = sv_add_scaled(&self.columns[c], &other.columns[c], &one);
        }
        m
    }
}

struct PivotColumn {
    /// Entries lie at rows ≥ the pivot row, which is `col[0].0`.
    col: SparseVec,
    history: SparseVec,
}

/// Incremental left-looking Gaussian elimination.
///
/// Pivot columns keep their minimal row as pivot row, so reducing a new
/// column by walking its entries in ascending row order never reintroduces an
/// already-eliminated row.  Deterministic given the insertion order.
pub struct Elimination {
    pivots: Vec<PivotColumn>,
    by_row: HashMap<usize, usize>,
    track_history: bool,
    next_col_index: usize,
    /// Histories of inserted columns that reduced to zero, i.e. kernel vectors
    /// of the matrix formed by the inserted columns.  Only filled when history
    /// tracking is on.
    null_history: Vec<SparseVec>,
}

impl Elimination {
    pub fn new(track_history: bool) -> Self {
        Elimination {
            pivots: Vec::new(),
            by_row: HashMap::new(),
            track_history,
            next_col_index: 0,
            null_history: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the current pivot columns, tracking the combination
    /// of previously inserted columns used, as `history` over insertion indices.
    pub fn reduce(&self, mut v: SparseVec, mut history: SparseVec) -> (SparseVec, SparseVec) {
        let mut i = 0;
        while i < v.len() {
            let row = v[i].0;
            if let Some(&p) = self.by_row.get(&row) {
                let piv = &self.pivots[p];
                let factor = -(&v[i].1 / &piv.col[0].1);
                v = sv_add_scaled(&v, &piv.col, &factor);
                if self.track_history {
                    history = sv_add_scaled(&history, &piv.history, &factor);
                }
                // entries at rows < `row` are untouched; v[i] is gone
            } else {
                i += 1;
            }
        }
        (v, history)
    }

    /// Reduces and, if nonzero remains, installs the result as a new pivot
    /// column.  Returns `true` when the column increased the rank.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let idx = self.next_col_index;
        self.next_col_index += 1;
        let seed = if self.track_history {
            vec![(idx, Scalar::from_integer(1.into()))]
        } else {
            Vec::new()
        };
        let (v, history) = self.reduce(v, seed);
        if v.is_empty() {
            if self.track_history {
                self.null_history.push(history);
            }
            return false;
        }
        let row = v[0].0;
        self.by_row.insert(row, self.pivots.len());
        self.pivots.push(PivotColumn { col: v, history });
        true
    }

    pub fn kernel(&self) -> &[SparseVec] {
        &self.null_history
    }
}

pub fn rank(m: &SparseMatrix) -> usize {
    let mut elim = Elimination::new(false);
    for c in 0..m.cols {
        elim.insert(m.column(c).clone());
    }
    elim.rank()
}

/// Exact basis of the null space; empty when the matrix is injective.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<SparseVec> {
    let mut elim = Elimination::new(true);
    for c in 0..m.cols {
        elim.insert(m.column(c).clone());
    }
    elim.null_history
}

impl Elimination {
    /// Solves `A x = b` where `A`'s columns are the columns inserted so far.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        assert!(self.track_history, "solve requires history tracking");
        let (residual, history) = self.reduce(b.clone(), Vec::new());
        if residual.is_empty() {
            // b reduced to zero as b + Σ c·col, so x = -history solves A x = b
            Some(history.into_iter().map(|(i, v)| (i, -v)).collect())
        } else {
            None
        }
    }
}

/// One solution of `m · x = b`, if any.
pub fn solve(m: &SparseMatrix, b: &SparseVec) -> Option<SparseVec> {
    let mut elim = Elimination::new(true);
    for c in 0..m.cols {
        elim.insert(m.column(c).clone());
    }
    elim.solve(b)
}

#[cfg(test)]
mod tests {
    use super::super::scalar::int;
    use super::*;

    fn mat(rows: usize, cols: usize, data: &[&[i64]]) -> SparseMatrix {
        let mut entries = Vec::new();
        for (r, row) in data.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                entries.push((r, c, int(*v)));
            }
        }
        SparseMatrix::from_triplets(rows, cols, entries)
    }

    #[test]
    fn rank_identity() {
        assert_eq!(rank(&SparseMatrix::identity(3)), 3);
    }

    #[test]
    fn rank_zero_matrix() {
        assert_eq!(rank(&SparseMatrix::zero(2, 5)), 0);
    }

    #[test]
    fn rank_proportional_rows() {
        let m = mat(2, 2, &[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(kernel_basis(&SparseMatrix::identity(4)).is_empty());
    }

    #[test]
    fn kernel_of_zero_map() {
        let k = kernel_basis(&SparseMatrix::zero(1, 2));
        assert_eq!(k.len(), 2);
    }

    #[test]
    fn kernel_of_row_sum() {
        let m = mat(1, 2, &[&[1, 1]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        // spans (1, -1)
        let v = &k[0];
        assert_eq!(v.len(), 2);
        assert_eq!(v[0].1, -v[1].1.clone());
        assert!(m.apply(v).is_empty());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = mat(2, 2, &[&[1, 2], &[2, 4]]);
        let b = vec![(0, int(3)), (1, int(6))];
        let x = solve(&m, &b).unwrap();
        assert_eq!(m.apply(&x), b);
        let bad = vec![(0, int(1))];
        assert!(solve(&m, &bad).is_none());
    }

    #[test]
    fn transpose_round_trip() {
        let m = mat(2, 3, &[&[1, 0, 2], &[0, -1, 3]]);
        assert_eq!(m.transpose().transpose(), m);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = SparseMatrix> {
            (1usize..6, 1usize..6).prop_flat_map(|(rows, cols)| {
                proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |data| {
                    SparseMatrix::from_triplets(
                        rows,
                        cols,
                        data.iter()
                            .enumerate()
                            .map(|(k, v)| (k / cols, k % cols, int(*v))),
                    )
                })
            })
        }

        proptest! {
            #[test]
            fn rank_plus_nullity_is_column_count(m in arb_matrix()) {
                prop_assert_eq!(rank(&m) + kernel_basis(&m).len(), m.cols);
            }

            #[test]
            fn kernel_vectors_are_annihilated(m in arb_matrix()) {
                for v in kernel_basis(&m) {
                    prop_assert!(!v.is_empty());
                    prop_assert!(m.apply(&v).is_empty());
                }
            }

            #[test]
            fn solve_recovers_consistent_systems(m in arb_matrix(), x in proptest::collection::vec(-3i64..=3, 1..6)) {
                let x: SparseVec = x
                    .into_iter()
                    .take(m.cols)
                    .enumerate()
                    .filter(|(_, v)| *v != 0)
                    .map(|(i, v)| (i, int(v)))
                    .collect();
                let b = m.apply(&x);
                let sol = solve(&m, &b).expect("consistent by construction");
                prop_assert_eq!(m.apply(&sol), b);
            }
        }
    }
}
