use std::collections::BTreeMap;
use std::sync::Arc;

use super::matrix::{SparseMatrix, SparseVec};
use super::scalar::Scalar;
use crate::{Error, Result};

/// Graded vector space with an ordered, canonically labelled basis per degree.
///
/// Upper (cohomological) grading.  Labels are canonical strings so that maps
/// between independently built spaces can be compared bit-exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    degrees: BTreeMap<i64, Vec<String>>,
}

impl GradedSpace {
    pub fn new(degrees: BTreeMap<i64, Vec<String>>) -> Self {
        for (n, labels) in &degrees {
            let mut seen = std::collections::HashSet::new();
            for l in labels {
                assert!(seen.insert(l), "duplicate basis label `{l}` in degree {n}");
            }
        }
        GradedSpace { degrees }
    }

    pub fn empty() -> Self {
        GradedSpace {
            degrees: BTreeMap::new(),
        }
    }

    pub fn dim(&self, n: i64) -> usize {
        self.degrees.get(&n).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.degrees.values().map(Vec::len).sum()
    }

    pub fn labels(&self, n: i64) -> &[String] {
        self.degrees.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.degrees.keys().copied()
    }

    pub fn lo(&self) -> i64 {
        self.degrees.keys().next().copied().unwrap_or(0)
    }

    pub fn hi(&self) -> i64 {
        self.degrees.keys().next_back().copied().unwrap_or(0)
    }

    pub fn position(&self, n: i64, label: &str) -> Option<usize> {
        self.labels(n).iter().position(|l| l == label)
    }

    /// The graded dual: the functionals on degree `n` sit in degree `−n`,
    /// with labels decorated by `^`.
    pub fn dual(&self) -> GradedSpace {
        let degrees = self
            .degrees
            .iter()
            .map(|(n, labels)| (-n, labels.iter().map(|l| format!("{l}^")).collect()))
            .collect();
        GradedSpace { degrees }
    }
}

/// Degree-homogeneous linear map between graded spaces, stored as one exact
/// sparse block per source degree.
///
/// The block at source degree `n` maps the basis of `source^n` to
/// `target^(n+degree)`; absent blocks are zero.
#[derive(Clone, Debug)]
pub struct DegreeMap {
    pub degree: i64,
    source: Arc<GradedSpace>,
    target: Arc<GradedSpace>,
    blocks: BTreeMap<i64, SparseMatrix>,
}

impl DegreeMap {
    pub fn zero(source: Arc<GradedSpace>, target: Arc<GradedSpace>, degree: i64) -> Self {
        DegreeMap {
            degree,
            source,
            target,
            blocks: BTreeMap::new(),
        }
    }

    /// Builds blocks by evaluating `f` on every basis element of the source
    /// degrees in `range`, as a sparse column over the target basis.
    pub fn from_fn(
        source: Arc<GradedSpace>,
        target: Arc<GradedSpace>,
        degree: i64,
        range: impl IntoIterator<Item = i64>,
        mut f: impl FnMut(i64, usize) -> SparseVec,
    ) -> Self {
        let mut blocks = BTreeMap::new();
        for n in range {
            let rows = target.dim(n + degree);
            let cols = source.dim(n);
            let mut m = SparseMatrix::zero(rows, cols);
            for j in 0..cols {
                let col = f(n, j);
                debug_assert!(col.iter().all(|(i, _)| *i < rows));
                m.set_column(j, col);
            }
            blocks.insert(n, m);
        }
        DegreeMap {
            degree,
            source,
            target,
            blocks,
        }
    }

    pub fn insert_block(&mut self, n: i64, block: SparseMatrix) {
        assert_eq!(block.cols, self.source.dim(n), "block shape mismatch");
        assert_eq!(
            block.rows,
            self.target.dim(n + self.degree),
            "block shape mismatch"
        );
        self.blocks.insert(n, block);
    }

    pub fn source(&self) -> &Arc<GradedSpace> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedSpace> {
        &self.target
    }

    pub fn block(&self, n: i64) -> Option<&SparseMatrix> {
        self.blocks.get(&n)
    }

    pub fn block_range(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.keys().copied()
    }

    /// Applies the stored block at degree `n`; absent blocks act as zero.
    pub fn apply(&self, n: i64, v: &SparseVec) -> SparseVec {
        match self.blocks.get(&n) {
            Some(m) => m.apply(v),
            None => Vec::new(),
        }
    }

    /// Composition `self ∘ other`, a degree-`(d_self + d_other)` map.
    /// Blocks exist where `other` has one; missing `self` blocks act as zero.
    pub fn compose(&self, other: &DegreeMap) -> DegreeMap {
        let degree = self.degree + other.degree;
        let mut blocks = BTreeMap::new();
        for (n, b) in &other.blocks {
            let mid = n + other.degree;
            let rows = self.target.dim(mid + self.degree);
            let block = match self.blocks.get(&mid) {
                Some(a) => a.compose(b),
                None => SparseMatrix::zero(rows, b.cols),
            };
            blocks.insert(*n, block);
        }
        DegreeMap {
            degree,
            source: other.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn add(&self, other: &DegreeMap) -> DegreeMap {
        assert_eq!(self.degree, other.degree);
        let mut blocks = self.blocks.clone();
        for (n, b) in &other.blocks {
            match blocks.get_mut(n) {
                Some(a) => *a = a.add(b),
                None => {
                    blocks.insert(*n, b.clone());
                }
            }
        }
        DegreeMap {
            degree: self.degree,
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn scaled(&self, c: &Scalar) -> DegreeMap {
        let blocks = self
            .blocks
            .iter()
            .map(|(n, b)| (*n, b.scaled(c)))
            .collect();
        DegreeMap {
            degree: self.degree,
            source: self.source.clone(),
            target: self.target.clone(),
            blocks,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(SparseMatrix::is_zero)
    }

    /// First nonzero column, as a witness `(source degree, basis index)`.
    pub fn first_nonzero(&self) -> Option<(i64, usize)> {
        for (n, b) in &self.blocks {
            for c in 0..b.cols {
                if !b.column(c).is_empty() {
                    return Some((*n, c));
                }
            }
        }
        None
    }

    /// The graded dual `f^∨(φ) = (−1)^{|f||φ|} φ∘f`, a map of the same degree
    /// between the dual spaces.  Blocks are signed transposes.
    pub fn dual(&self) -> DegreeMap {
        let source = Arc::new(self.target.dual());
        let target = Arc::new(self.source.dual());
        let mut blocks = BTreeMap::new();
        for (n, b) in &self.blocks {
            // functionals on target^(n+d) sit in dual degree −(n+d)
            let phi_degree = n + self.degree;
            let mut t = b.transpose();
            if (self.degree * phi_degree) % 2 != 0 {
                t = t.scaled(&-Scalar::from_integer(1.into()));
            }
            blocks.insert(-phi_degree, t);
        }
        DegreeMap {
            degree: self.degree,
            source,
            target,
            blocks,
        }
    }

    /// The defect `d_target ∘ f − (−1)^{|f|} f ∘ d_source` of the graded
    /// chain-map property, restricted to source degrees where both routes are
    /// stored.  Zero iff `f` commutes with the differentials in the graded
    /// sense on that range.
    pub fn chain_defect(&self, d_source: &DegreeMap, d_target: &DegreeMap) -> DegreeMap {
        let left = d_target.compose(self);
        let right = self.compose(d_source);
        let sign = if self.degree % 2 == 0 {
            Scalar::from_integer((-1).into())
        } else {
            Scalar::from_integer(1.into())
        };
        let mut defect = left.add(&right.scaled(&sign));
        // keep only degrees where both compositions had stored blocks
        let keep: Vec<i64> = defect
            .blocks
            .keys()
            .copied()
            .filter(|n| {
                self.blocks.contains_key(n)
                    && d_target.blocks.contains_key(&(n + self.degree))
                    && d_source.blocks.contains_key(n)
                    && self.blocks.contains_key(&(n + d_source.degree))
            })
            .collect();
        defect.blocks.retain(|n, _| keep.contains(n));
        defect
    }
}

/// Range check helper shared by homology and reporting code.
pub(crate) fn check_range(space: &GradedSpace, n: i64) -> Result<()> {
    if space.degrees.is_empty() || n < space.lo() || n > space.hi() {
        Err(Error::DegreeRange {
            degree: n,
            lo: space.lo(),
            hi: space.hi(),
        })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::scalar::int;
    use super::*;

    fn space(dims: &[(i64, usize)]) -> Arc<GradedSpace> {
        let degrees = dims
            .iter()
            .map(|(n, d)| (*n, (0..*d).map(|i| format!("e{n}_{i}")).collect()))
            .collect();
        Arc::new(GradedSpace::new(degrees))
    }

    fn identity_map(s: &Arc<GradedSpace>) -> DegreeMap {
        let mut m = DegreeMap::zero(s.clone(), s.clone(), 0);
        for n in s.degrees().collect::<Vec<_>>() {
            m.insert_block(n, SparseMatrix::identity(s.dim(n)));
        }
        m
    }

    #[test]
    fn dual_of_identity_is_identity() {
        let s = space(&[(0, 2), (3, 1)]);
        let id = identity_map(&s);
        let d = id.dual();
        assert_eq!(d.degree, 0);
        for n in [0i64, -3] {
            let b = d.block(n).unwrap();
            assert_eq!(*b, SparseMatrix::identity(b.rows));
        }
    }

    #[test]
    fn dual_of_zero_is_zero() {
        let s = space(&[(0, 2)]);
        let z = DegreeMap::zero(s.clone(), s, 2);
        assert!(z.dual().is_zero());
    }

    #[test]
    fn double_dual_returns_original_blocks_even_degree() {
        // reflexivity for even-degree maps on a finite range
        let s = space(&[(0, 2), (2, 2)]);
        let mut f = DegreeMap::zero(s.clone(), s.clone(), 2);
        f.insert_block(
            0,
            SparseMatrix::from_triplets(2, 2, vec![(0, 0, int(3)), (1, 0, int(1)), (0, 1, int(-2))]),
        );
        let dd = f.dual().dual();
        // double dual lands on the double-dual space; compare blocks
        assert_eq!(dd.block(0), f.block(0));
    }

    #[test]
    fn dual_reverses_composition_with_koszul_sign() {
        // (g∘f)^∨ = (−1)^{|f||g|} f^∨ ∘ g^∨ on a sample of odd-degree maps
        let a = space(&[(0, 2), (1, 2), (2, 2)]);
        let mut f = DegreeMap::zero(a.clone(), a.clone(), 1);
        f.insert_block(
            0,
            SparseMatrix::from_triplets(2, 2, vec![(0, 0, int(1)), (1, 1, int(2))]),
        );
        f.insert_block(
            1,
            SparseMatrix::from_triplets(2, 2, vec![(1, 0, int(-1)), (0, 1, int(5))]),
        );
        let mut g = DegreeMap::zero(a.clone(), a.clone(), 1);
        g.insert_block(
            1,
            SparseMatrix::from_triplets(2, 2, vec![(0, 0, int(7)), (0, 1, int(1))]),
        );
        g.insert_block(2, SparseMatrix::zero(0, 2));
        let lhs = g.compose(&f).dual();
        let rhs = f.dual().compose(&g.dual()).scaled(&int(-1)); // (−1)^{1·1}
        for n in lhs.block_range() {
            if let (Some(l), Some(r)) = (lhs.block(n), rhs.block(n)) {
                assert_eq!(l, r, "mismatch at dual degree {n}");
            }
        }
    }
}
