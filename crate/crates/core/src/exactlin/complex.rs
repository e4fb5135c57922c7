use std::sync::Arc;

use super::matrix::{Elimination, SparseMatrix, SparseVec};
use super::scalar::Scalar;
use super::space::{check_range, DegreeMap, GradedSpace};
use crate::Result;

/// Cochain complex: a graded space with a degree `+1` differential.
#[derive(Clone, Debug)]
pub struct Complex {
    space: Arc<GradedSpace>,
    differential: DegreeMap,
}

impl Complex {
    pub fn new(space: Arc<GradedSpace>, differential: DegreeMap) -> Self {
        assert_eq!(differential.degree, 1, "differential must have degree +1");
        Complex {
            space,
            differential,
        }
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn differential(&self) -> &DegreeMap {
        &self.differential
    }

    /// Verifies `d∘d = 0` on every basis vector where two consecutive blocks
    /// are stored.  Returns a witness `(degree, basis index)` on failure.
    pub fn check_square_zero(&self) -> std::result::Result<(), (i64, usize)> {
        for n in self.differential.block_range().collect::<Vec<_>>() {
            if self.differential.block(n + 1).is_none() {
                continue;
            }
            let b = self.differential.block(n).unwrap();
            for j in 0..b.cols {
                let once = b.column(j);
                if !self.differential.apply(n + 1, once).is_empty() {
                    return Err((n, j));
                }
            }
        }
        Ok(())
    }

    /// Homology at degree `n`: dimension, representative cycles, and
    /// coordinate functionals.
    ///
    /// Blocks absent from the stored differential act as zero, so the result
    /// is only meaningful at degrees where the stored complex is complete.
    pub fn homology(&self, n: i64) -> Result<Homology> {
        check_range(&self.space, n)?;
        let dim_n = self.space.dim(n);
        let d_in = self.differential.block(n - 1);
        let d_out = self.differential.block(n);

        // image basis: reduced pivot columns of the incoming block
        let mut boundary_elim = Elimination::new(false);
        let mut boundaries: Vec<SparseVec> = Vec::new();
        if let Some(m) = d_in {
            let mut elim = Elimination::new(false);
            for c in 0..m.cols {
                let col = m.column(c).clone();
                if elim.insert(col.clone()) {
                    boundaries.push(col);
                    boundary_elim.insert(m.column(c).clone());
                }
            }
        }

        // cycles: kernel of the outgoing block (all of C^n when absent)
        let cycles: Vec<SparseVec> = match d_out {
            Some(m) => super::matrix::kernel_basis(m),
            None => (0..dim_n)
                .map(|i| vec![(i, Scalar::from_integer(1.into()))])
                .collect(),
        };

        // complete boundaries to the cycle space; new pivots are the classes
        let mut reps: Vec<SparseVec> = Vec::new();
        for z in &cycles {
            if boundary_elim.insert(z.clone()) {
                reps.push(z.clone());
            }
        }

        // coordinate functionals: particular solutions of [B|H]^T y = e_i
        let n_b = boundaries.len();
        let n_h = reps.len();
        let mut functionals: Vec<Vec<Scalar>> = Vec::new();
        if n_h > 0 {
            let mut bh = SparseMatrix::zero(dim_n, n_b + n_h);
            for (c, col) in boundaries.iter().chain(reps.iter()).enumerate() {
                bh.set_column(c, col.clone());
            }
            let t = bh.transpose();
            let mut elim = Elimination::new(true);
            for c in 0..t.cols {
                elim.insert(t.column(c).clone());
            }
            for i in 0..n_h {
                let rhs = vec![(n_b + i, Scalar::from_integer(1.into()))];
                let y = elim
                    .solve(&rhs)
                    .expect("coordinate functional solve cannot fail: columns are independent");
                let mut dense = vec![Scalar::from_integer(0.into()); dim_n];
                for (j, v) in y {
                    dense[j] = v;
                }
                functionals.push(dense);
            }
        }

        Ok(Homology {
            degree: n,
            dim: n_h,
            reps,
            functionals,
        })
    }
}

/// Homology of one degree of a [`Complex`].
///
/// `reps` are cycles whose classes form a basis; `project` sends any cycle in
/// that degree to its coordinates in this basis.  The functionals vanish on
/// boundaries, so they also implement a chain projection `π` usable on
/// arbitrary chains (legs of tensors) when extracting Künneth coordinates.
#[derive(Clone, Debug)]
pub struct Homology {
    pub degree: i64,
    pub dim: usize,
    pub reps: Vec<SparseVec>,
    functionals: Vec<Vec<Scalar>>,
}

impl Homology {
    /// Class coordinates of a cycle (or π-projection of any chain).
    pub fn project(&self, v: &SparseVec) -> Vec<Scalar> {
        let mut out = vec![Scalar::from_integer(0.into()); self.dim];
        for (i, f) in self.functionals.iter().enumerate() {
            let mut acc = Scalar::from_integer(0.into());
            for (j, c) in v {
                acc += &f[*j] * c;
            }
            out[i] = acc;
        }
        out
    }

    /// Single coordinate of a basis vector, avoiding the dense projection.
    pub fn coord_of_basis(&self, class: usize, basis_index: usize) -> &Scalar {
        &self.functionals[class][basis_index]
    }
}

/// Convenience form of [`Complex::homology`] used by tests and the public
/// operation surface.
pub fn homology(c: &Complex, n: i64) -> Result<Homology> {
    c.homology(n)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::super::scalar::int;
    use super::*;

    fn space(dims: &[(i64, usize)]) -> Arc<GradedSpace> {
        let degrees = dims
            .iter()
            .map(|(n, d)| (*n, (0..*d).map(|i| format!("e{n}_{i}")).collect()))
            .collect::<BTreeMap<_, _>>();
        Arc::new(GradedSpace::new(degrees))
    }

    #[test]
    fn acyclic_two_term_complex() {
        // 0 → ℚ --id--> ℚ → 0
        let s = space(&[(0, 1), (1, 1)]);
        let mut d = DegreeMap::zero(s.clone(), s.clone(), 1);
        d.insert_block(0, SparseMatrix::identity(1));
        let c = Complex::new(s, d);
        c.check_square_zero().unwrap();
        assert_eq!(c.homology(0).unwrap().dim, 0);
        assert_eq!(c.homology(1).unwrap().dim, 0);
    }

    #[test]
    fn zero_differential_returns_dims() {
        let s = space(&[(2, 3)]);
        let d = DegreeMap::zero(s.clone(), s.clone(), 1);
        let c = Complex::new(s, d);
        let h = c.homology(2).unwrap();
        assert_eq!(h.dim, 3);
        // projection of a rep is a standard coordinate vector
        assert_eq!(h.project(&h.reps[1].clone()), vec![int(0), int(1), int(0)]);
    }

    #[test]
    fn koszul_style_two_step() {
        // ℚ --(1,1)--> ℚ² --(1,−1)--> ℚ, composite zero.
        // By hand: rank d0 = 1, ker d1 = span{(1,1)} (dim 1), so H^1 = 0;
        // H^0 = ker d0 = 0; H^2 = ℚ / im(1,−1) = 0.
        let s = space(&[(0, 1), (1, 2), (2, 1)]);
        let mut d = DegreeMap::zero(s.clone(), s.clone(), 1);
        d.insert_block(
            0,
            SparseMatrix::from_triplets(2, 1, vec![(0, 0, int(1)), (1, 0, int(1))]),
        );
        d.insert_block(
            1,
            SparseMatrix::from_triplets(1, 2, vec![(0, 0, int(1)), (0, 1, int(-1))]),
        );
        let c = Complex::new(s, d);
        c.check_square_zero().unwrap();
        assert_eq!(c.homology(0).unwrap().dim, 0);
        assert_eq!(c.homology(1).unwrap().dim, 0);
        assert_eq!(c.homology(2).unwrap().dim, 0);
    }

    #[test]
    fn out_of_range_degree_is_an_error() {
        let s = space(&[(0, 1)]);
        let d = DegreeMap::zero(s.clone(), s.clone(), 1);
        let c = Complex::new(s, d);
        assert!(c.homology(5).is_err());
    }

    #[test]
    fn projection_kills_boundaries() {
        // ℚ --(2)--> ℚ² with second coordinate untouched
        let s = space(&[(0, 1), (1, 2)]);
        let mut d = DegreeMap::zero(s.clone(), s.clone(), 1);
        d.insert_block(0, SparseMatrix::from_triplets(2, 1, vec![(0, 0, int(2))]));
        let c = Complex::new(s, d);
        let h = c.homology(1).unwrap();
        assert_eq!(h.dim, 1);
        let boundary = vec![(0, int(7))];
        assert_eq!(h.project(&boundary), vec![int(0)]);
    }
}
