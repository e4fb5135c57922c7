//! Commutative differential graded algebras with Poincaré duality.
//!
//! A [`Cdga`] is finite dimensional, connected (`A⁰ = ℚ·1`) and 1-connected
//! (`A¹ = 0`), with a degree `+1` differential.  A [`PdModel`] adds the top
//! dimension `m` and an orientation functional on the degree-`m` component;
//! the induced pairing `⟨a,b⟩ = ∫(ab)` must be nondegenerate in every
//! complementary pair of degrees.
//!
//! Validation is eager and total: the Hochschild and string topology layers
//! refuse unvalidated algebras, because a sign error downstream is
//! indistinguishable from a malformed input.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::exactlin::{
    int, solve, sv_add_scaled, sv_scale, DegreeMap, GradedSpace, Scalar, SparseMatrix, SparseVec,
};
use crate::{Error, Result};

/// Index of a basis element in the flat basis order (degree, then label).
pub type ElemId = usize;

/// Sparse algebra element over the flat basis.
pub type Elt = SparseVec;

#[derive(Clone, Debug)]
pub struct Cdga {
    labels: Vec<String>,
    degrees: Vec<i64>,
    by_degree: BTreeMap<i64, Vec<ElemId>>,
    unit: ElemId,
    /// product[i][j] = expansion of e_i · e_j in the flat basis
    product: Vec<Vec<Elt>>,
    /// diff[i] = expansion of d(e_i)
    diff: Vec<Elt>,
    space: Arc<GradedSpace>,
}

/// One violated axiom, with a witness basis tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (witness: {})", self.axiom, self.witness)
    }
}

/// Violations are data, not failures; an empty report means the axioms hold.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, axiom: impl Into<String>, witness: impl Into<String>) {
        self.violations.push(Violation {
            axiom: axiom.into(),
            witness: witness.into(),
        });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_clean() {
            writeln!(f, "all axioms hold")
        } else {
            for v in &self.violations {
                writeln!(f, "violated: {v}")?;
            }
            Ok(())
        }
    }
}

/// Sparse element written against basis labels.
pub type LabelledElt = Vec<(String, Scalar)>;

/// Raw input for building a [`Cdga`]; see [`Cdga::new`].
pub struct CdgaData {
    /// (label, degree) pairs; order is irrelevant, the basis is sorted.
    pub basis: Vec<(String, i64)>,
    pub unit: String,
    /// Products μ(a, b) = Σ c·e on basis labels.  Missing pairs are zero,
    /// except products with the unit, which default to the unit law.
    pub products: Vec<(String, String, LabelledElt)>,
    /// d(a) = Σ c·e on basis labels; missing means zero.
    pub differential: Vec<(String, LabelledElt)>,
}

impl Cdga {
    /// Builds the algebra from sparse data.  Structural problems (unknown
    /// labels, shape errors) are hard errors; axiom violations are reported
    /// by [`Cdga::validate`] instead.
    pub fn new(data: CdgaData) -> Result<Cdga> {
        let mut basis = data.basis;
        basis.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        let labels: Vec<String> = basis.iter().map(|(l, _)| l.clone()).collect();
        let degrees: Vec<i64> = basis.iter().map(|(_, d)| *d).collect();
        let n = labels.len();
        let find = |label: &str| -> Result<ElemId> {
            labels
                .iter()
                .position(|l| l == label)
                .ok_or_else(|| Error::InvalidModel(format!("unknown basis label `{label}`")))
        };
        let unit = find(&data.unit)?;

        let mut by_degree: BTreeMap<i64, Vec<ElemId>> = BTreeMap::new();
        for (i, d) in degrees.iter().enumerate() {
            by_degree.entry(*d).or_default().push(i);
        }

        let expand = |entries: &[(String, Scalar)]| -> Result<Elt> {
            let mut out: Elt = Vec::new();
            for (l, c) in entries {
                let id = find(l)?;
                out = sv_add_scaled(&out, &[(id, c.clone())], &int(1));
            }
            Ok(out)
        };

        let mut product: Vec<Vec<Elt>> = vec![vec![Vec::new(); n]; n];
        let mut given: Vec<Vec<bool>> = vec![vec![false; n]; n];
        for (a, b, value) in &data.products {
            let (i, j) = (find(a)?, find(b)?);
            product[i][j] = expand(value)?;
            given[i][j] = true;
        }
        // unit laws fill products that were not specified
        for i in 0..n {
            if !given[unit][i] {
                product[unit][i] = vec![(i, int(1))];
            }
            if !given[i][unit] {
                product[i][unit] = vec![(i, int(1))];
            }
        }
        // graded commutativity fills one-sided entries
        for i in 0..n {
            for j in 0..n {
                if given[i][j] && !given[j][i] {
                    let sign = if (degrees[i] * degrees[j]) % 2 != 0 {
                        int(-1)
                    } else {
                        int(1)
                    };
                    product[j][i] = sv_scale(&product[i][j], &sign);
                    given[j][i] = true;
                }
            }
        }

        let mut diff: Vec<Elt> = vec![Vec::new(); n];
        for (a, value) in &data.differential {
            diff[find(a)?] = expand(value)?;
        }

        let space = Arc::new(GradedSpace::new(
            by_degree
                .iter()
                .map(|(d, ids)| (*d, ids.iter().map(|i| labels[*i].clone()).collect()))
                .collect(),
        ));

        Ok(Cdga {
            labels,
            degrees,
            by_degree,
            unit,
            product,
            diff,
            space,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: ElemId) -> &str {
        &self.labels[i]
    }

    pub fn degree(&self, i: ElemId) -> i64 {
        self.degrees[i]
    }

    pub fn unit(&self) -> ElemId {
        self.unit
    }

    pub fn space(&self) -> &Arc<GradedSpace> {
        &self.space
    }

    pub fn basis_of_degree(&self, n: i64) -> &[ElemId] {
        self.by_degree.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn top_degree(&self) -> i64 {
        *self.by_degree.keys().next_back().unwrap_or(&0)
    }

    /// Ids of the positive-degree part Ā, in basis order.
    pub fn augmentation_ideal(&self) -> impl Iterator<Item = ElemId> + '_ {
        (0..self.dim()).filter(|i| self.degrees[*i] > 0)
    }

    pub fn mul_basis(&self, i: ElemId, j: ElemId) -> &Elt {
        &self.product[i][j]
    }

    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        let mut out: Elt = Vec::new();
        for (i, ca) in a {
            for (j, cb) in b {
                out = sv_add_scaled(&out, &self.product[*i][*j], &(ca * cb));
            }
        }
        out
    }

    pub fn d_basis(&self, i: ElemId) -> &Elt {
        &self.diff[i]
    }

    pub fn d(&self, a: &Elt) -> Elt {
        let mut out: Elt = Vec::new();
        for (i, c) in a {
            out = sv_add_scaled(&out, &self.diff[*i], c);
        }
        out
    }

    /// Position of a basis element inside its degree's ordered basis.
    pub fn position_in_degree(&self, i: ElemId) -> usize {
        self.basis_of_degree(self.degrees[i])
            .iter()
            .position(|j| *j == i)
            .expect("element listed in its own degree")
    }

    pub fn id_at(&self, degree: i64, position: usize) -> ElemId {
        self.basis_of_degree(degree)[position]
    }

    /// The differential as a [`DegreeMap`] on the underlying graded space.
    pub fn differential_map(&self) -> DegreeMap {
        let range: Vec<i64> = self.by_degree.keys().copied().collect();
        DegreeMap::from_fn(
            self.space.clone(),
            self.space.clone(),
            1,
            range,
            |deg, pos| {
                let id = self.id_at(deg, pos);
                self.elt_to_degree_vec(self.d_basis(id), deg + 1)
            },
        )
    }

    /// Rewrites a (degree-homogeneous) element as coordinates in the ordered
    /// basis of `degree`.  Components outside that degree are a bug.
    pub fn elt_to_degree_vec(&self, a: &Elt, degree: i64) -> SparseVec {
        let mut out: SparseVec = a
            .iter()
            .map(|(i, c)| {
                assert_eq!(self.degrees[*i], degree, "inhomogeneous element");
                (self.position_in_degree(*i), c.clone())
            })
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out
    }

    /// Checks every algebra axiom, reporting all violations with witnesses.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.dim();

        if self.degrees[self.unit] != 0 {
            report.push("unit must have degree 0", self.labels[self.unit].clone());
        }
        if self.basis_of_degree(0).len() != 1 {
            report.push(
                "connectedness: degree 0 must be one-dimensional",
                format!("dim A^0 = {}", self.basis_of_degree(0).len()),
            );
        }
        if !self.basis_of_degree(1).is_empty() {
            report.push(
                "1-connected input required: degree 1 must vanish",
                self.labels[self.basis_of_degree(1)[0]].clone(),
            );
        }
        if let Some(d) = self.by_degree.keys().find(|d| **d < 0) {
            report.push("negative degree", format!("degree {d}"));
        }

        // degree-homogeneity of products and differential
        for i in 0..n {
            for j in 0..n {
                let expect = self.degrees[i] + self.degrees[j];
                for (k, _) in &self.product[i][j] {
                    if self.degrees[*k] != expect {
                        report.push(
                            "product not degree-homogeneous",
                            format!(
                                "{}·{} has a component {} of degree {} ≠ {}",
                                self.labels[i], self.labels[j], self.labels[*k],
                                self.degrees[*k], expect
                            ),
                        );
                    }
                }
            }
            for (k, _) in &self.diff[i] {
                if self.degrees[*k] != self.degrees[i] + 1 {
                    report.push(
                        "differential must raise degree by 1",
                        format!("d({}) ∋ {}", self.labels[i], self.labels[*k]),
                    );
                }
            }
        }

        // unit law
        for i in 0..n {
            let left = &self.product[self.unit][i];
            let right = &self.product[i][self.unit];
            let expect = vec![(i, int(1))];
            if *left != expect || *right != expect {
                report.push("unit law 1·a = a·1 = a", self.labels[i].clone());
            }
        }

        // graded commutativity
        for i in 0..n {
            for j in 0..n {
                let sign = if (self.degrees[i] * self.degrees[j]) % 2 != 0 {
                    int(-1)
                } else {
                    int(1)
                };
                let flipped = sv_scale(&self.product[j][i], &sign);
                if self.product[i][j] != flipped {
                    report.push(
                        "graded commutativity ab = (−1)^{|a||b|} ba",
                        format!("({}, {})", self.labels[i], self.labels[j]),
                    );
                }
            }
        }

        // associativity
        for i in 0..n {
            for j in 0..n {
                let ij = self.product[i][j].clone();
                for k in 0..n {
                    let left = self.mul(&ij, &vec![(k, int(1))]);
                    let right = self.mul(&vec![(i, int(1))], &self.product[j][k]);
                    if left != right {
                        report.push(
                            "associativity (ab)c = a(bc)",
                            format!(
                                "({}, {}, {})",
                                self.labels[i], self.labels[j], self.labels[k]
                            ),
                        );
                    }
                }
            }
        }

        // d∘d = 0
        for i in 0..n {
            if !self.d(&self.diff[i]).is_empty() {
                report.push("d∘d = 0", self.labels[i].clone());
            }
        }

        // Leibniz d(ab) = d(a)b + (−1)^{|a|} a d(b)
        for i in 0..n {
            for j in 0..n {
                let lhs = self.d(&self.product[i][j]);
                let sign = if self.degrees[i] % 2 != 0 {
                    int(-1)
                } else {
                    int(1)
                };
                let rhs = sv_add_scaled(
                    &self.mul(&self.diff[i].clone(), &vec![(j, int(1))]),
                    &self.mul(&vec![(i, int(1))], &self.diff[j]),
                    &sign,
                );
                if lhs != rhs {
                    report.push(
                        "Leibniz d(ab) = d(a)b + (−1)^{|a|} a d(b)",
                        format!("({}, {})", self.labels[i], self.labels[j]),
                    );
                }
            }
        }

        report
    }
}

/// Finite-dimensional CDGA with an orientation realizing Poincaré duality in
/// dimension `m`.
#[derive(Clone, Debug)]
pub struct PdModel {
    algebra: Cdga,
    pub dimension: i64,
    /// ∫ on the degree-`m` basis, in that degree's basis order.
    orientation: Vec<Scalar>,
}

impl PdModel {
    pub fn new(algebra: Cdga, dimension: i64, orientation: Vec<Scalar>) -> Result<PdModel> {
        if orientation.len() != algebra.basis_of_degree(dimension).len() {
            return Err(Error::InvalidModel(format!(
                "orientation has {} values but degree {} has dimension {}",
                orientation.len(),
                dimension,
                algebra.basis_of_degree(dimension).len()
            )));
        }
        Ok(PdModel {
            algebra,
            dimension,
            orientation,
        })
    }

    pub fn algebra(&self) -> &Cdga {
        &self.algebra
    }

    pub fn orientation(&self) -> &[Scalar] {
        &self.orientation
    }

    /// ∫ evaluated on (the degree-`m` component of) an element.
    pub fn integrate(&self, a: &Elt) -> Scalar {
        let mut acc = int(0);
        for (i, c) in a {
            if self.algebra.degree(*i) == self.dimension {
                acc += &self.orientation[self.algebra.position_in_degree(*i)] * c;
            }
        }
        acc
    }

    /// The Poincaré pairing ⟨a, b⟩ = ∫(a·b) on basis elements.
    pub fn pairing(&self, i: ElemId, j: ElemId) -> Scalar {
        self.integrate(self.algebra.mul_basis(i, j))
    }

    /// Full validation: algebra axioms plus the duality-specific ones.
    pub fn validate(&self) -> ValidationReport {
        let mut report = self.algebra.validate();
        let m = self.dimension;

        if self.algebra.top_degree() > m {
            report.push(
                "algebra must vanish above the duality dimension",
                format!("degree {} > m = {m}", self.algebra.top_degree()),
            );
        }

        // ∫∘d = 0 on degree m−1
        for &i in self.algebra.basis_of_degree(m - 1) {
            let v = self.integrate(self.algebra.d_basis(i));
            if !v.is_zero() {
                report.push("orientation must vanish on boundaries (∫∘d = 0)", {
                    self.algebra.label(i).to_string()
                });
            }
        }

        // nondegeneracy of the pairing in every complementary pair of degrees
        for k in self.algebra.space().degrees().collect::<Vec<_>>() {
            if k > m - k {
                continue;
            }
            let rows = self.algebra.basis_of_degree(m - k);
            let cols = self.algebra.basis_of_degree(k);
            if rows.len() != cols.len() {
                report.push(
                    "Poincaré duality: complementary degrees must have equal dimension",
                    format!("dim A^{k} = {} ≠ dim A^{} = {}", cols.len(), m - k, rows.len()),
                );
                continue;
            }
            let mat = SparseMatrix::from_triplets(
                rows.len(),
                cols.len(),
                rows.iter().enumerate().flat_map(|(r, &i)| {
                    cols.iter()
                        .enumerate()
                        .map(move |(c, &j)| (r, c, self.pairing(j, i)))
                        .collect::<Vec<_>>()
                }),
            );
            if crate::exactlin::rank(&mat) != cols.len() {
                report.push(
                    "Poincaré pairing must be nondegenerate",
                    format!("degrees ({k}, {})", m - k),
                );
            }
        }

        report
    }

    /// The duality isomorphism θ : A → A^∨ of degree −m, θ(a) = ∫(a·−).
    ///
    /// Errors when the pairing is degenerate in some degree.
    pub fn duality_map(&self) -> Result<DegreeMap> {
        let m = self.dimension;
        let source = self.algebra.space().clone();
        let target = Arc::new(source.dual());
        let mut theta = DegreeMap::zero(source.clone(), target, -m);
        for k in source.degrees().collect::<Vec<_>>() {
            let dom = self.algebra.basis_of_degree(k);
            // functionals on A^{m−k}, i.e. dual degree k − m
            let cod = self.algebra.basis_of_degree(m - k);
            let block = SparseMatrix::from_triplets(
                cod.len(),
                dom.len(),
                dom.iter().enumerate().flat_map(|(c, &a)| {
                    cod.iter()
                        .enumerate()
                        .map(move |(r, &b)| (r, c, self.pairing(a, b)))
                        .collect::<Vec<_>>()
                }),
            );
            if crate::exactlin::rank(&block) != dom.len() || dom.len() != cod.len() {
                return Err(Error::DegeneratePairing(k));
            }
            theta.insert_block(k, block);
        }
        Ok(theta)
    }

    /// The diagonal bimodule map μ_A : A → A⊗A of degree m, the unique
    /// solution of (θ⊗θ)∘μ_A = μ^∨∘θ.  Written against the pairing, with
    /// `(θ⊗θ)(x′⊗x″) = (−1)^{m|x′|} θx′⊗θx″` and the evaluation
    /// `⟨φ⊗ψ, a⊗b⟩ = (−1)^{|ψ||a|} φ(a)ψ(b)`, the column for `x` solves
    ///
    /// ```text
    ///   Σ (−1)^{m|x′| + (|x″|+m)·|a|} ∫(x′·a) ∫(x″·b) = ∫(x·a·b)
    /// ```
    ///
    /// for all basis `a, b`, over the coefficients of μ_A(x) = Σ x′⊗x″.
    /// Postconditions (graded chain map and the graded bimodule identity)
    /// are checked exactly.
    pub fn diagonal_map(&self) -> Result<DiagonalMap> {
        let m = self.dimension;
        let alg = &self.algebra;
        let mut columns: Vec<Vec<(Scalar, ElemId, ElemId)>> = Vec::with_capacity(alg.dim());

        for x in 0..alg.dim() {
            let deg_x = alg.degree(x);
            // unknown basis pairs (u, v) with |u| + |v| = |x| + m
            let pairs: Vec<(ElemId, ElemId)> = (0..alg.dim())
                .flat_map(|u| {
                    (0..alg.dim())
                        .filter(move |v| alg.degree(u) + alg.degree(*v) == deg_x + m)
                        .map(move |v| (u, v))
                })
                .collect();
            // equations indexed by (a, b) with |a| + |b| = m − |x|
            let eqs: Vec<(ElemId, ElemId)> = (0..alg.dim())
                .flat_map(|a| {
                    (0..alg.dim())
                        .filter(move |b| alg.degree(a) + alg.degree(*b) == m - deg_x)
                        .map(move |b| (a, b))
                })
                .collect();
            let mut triplets = Vec::new();
            for (col, &(u, v)) in pairs.iter().enumerate() {
                for (row, &(a, b)) in eqs.iter().enumerate() {
                    let mut coeff = self.integrate(alg.mul_basis(u, a));
                    if coeff.is_zero() {
                        continue;
                    }
                    coeff *= self.integrate(alg.mul_basis(v, b));
                    if coeff.is_zero() {
                        continue;
                    }
                    let exponent = m * alg.degree(u) + (alg.degree(v) + m) * alg.degree(a);
                    if exponent % 2 != 0 {
                        coeff = -coeff;
                    }
                    triplets.push((row, col, coeff));
                }
            }
            let mat = SparseMatrix::from_triplets(eqs.len(), pairs.len(), triplets);
            let mut rhs: SparseVec = Vec::new();
            for (row, &(a, b)) in eqs.iter().enumerate() {
                let v = self.integrate(&alg.mul(alg.mul_basis(x, a), &vec![(b, int(1))]));
                if !v.is_zero() {
                    rhs.push((row, v));
                }
            }
            let sol = solve(&mat, &rhs).ok_or_else(|| {
                Error::Inconsistent(format!(
                    "diagonal map solve is singular at basis element {}",
                    alg.label(x)
                ))
            })?;
            let column = sol
                .into_iter()
                .map(|(k, c)| (c, pairs[k].0, pairs[k].1))
                .collect();
            columns.push(column);
        }

        let map = DiagonalMap {
            degree: m,
            columns,
        };
        map.check_chain_map(self)?;
        map.check_bimodule(self)?;
        Ok(map)
    }

    /// Tensor product of two models: Koszul-signed product, dimension
    /// `m₁ + m₂`, orientation `∫(a⊗b) = ±∫a·∫b`.
    pub fn tensor(&self, other: &PdModel) -> Result<PdModel> {
        let (a, b) = (&self.algebra, &other.algebra);
        let label = |i: ElemId, j: ElemId| format!("{}⊗{}", a.label(i), b.label(j));
        let mut basis = Vec::new();
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                basis.push((label(i, j), a.degree(i) + b.degree(j)));
            }
        }
        let mut products = Vec::new();
        for i1 in 0..a.dim() {
            for j1 in 0..b.dim() {
                for i2 in 0..a.dim() {
                    for j2 in 0..b.dim() {
                        // (x⊗y)(x′⊗y′) = (−1)^{|y||x′|} xx′ ⊗ yy′
                        let mut value = Vec::new();
                        for (k, ck) in a.mul_basis(i1, i2) {
                            for (l, cl) in b.mul_basis(j1, j2) {
                                let mut c = ck * cl;
                                if (b.degree(j1) * a.degree(i2)) % 2 != 0 {
                                    c = -c;
                                }
                                value.push((label(*k, *l), c));
                            }
                        }
                        if !value.is_empty() {
                            products.push((label(i1, j1), label(i2, j2), value));
                        }
                    }
                }
            }
        }
        let mut differential = Vec::new();
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                // d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy
                let mut value: Vec<(String, Scalar)> = Vec::new();
                for (k, c) in a.d_basis(i) {
                    value.push((label(*k, j), c.clone()));
                }
                for (l, c) in b.d_basis(j) {
                    let mut c = c.clone();
                    if a.degree(i) % 2 != 0 {
                        c = -c;
                    }
                    value.push((label(i, *l), c));
                }
                if !value.is_empty() {
                    differential.push((label(i, j), value));
                }
            }
        }
        let algebra = Cdga::new(CdgaData {
            basis,
            unit: label(a.unit(), b.unit()),
            products,
            differential,
        })?;
        let m = self.dimension + other.dimension;
        let orientation = algebra
            .basis_of_degree(m)
            .iter()
            .map(|&id| {
                let l = algebra.label(id);
                let (la, lb) = l.split_once('⊗').expect("tensor label");
                let i = a
                    .basis_of_degree(self.dimension)
                    .iter()
                    .find(|&&i| a.label(i) == la);
                let j = b
                    .basis_of_degree(other.dimension)
                    .iter()
                    .find(|&&j| b.label(j) == lb);
                match (i, j) {
                    (Some(&i), Some(&j)) => {
                        // ∫ only sees top⊗top components; moving ∫_b past a
                        // top-degree a-factor costs (−1)^{m_a · m_b}
                        let mut c = self.orientation[a.position_in_degree(i)].clone()
                            * &other.orientation[b.position_in_degree(j)];
                        if (self.dimension * other.dimension) % 2 != 0 {
                            c = -c;
                        }
                        c
                    }
                    _ => int(0),
                }
            })
            .collect();
        PdModel::new(algebra, m, orientation)
    }
}

/// μ_A as explicit tensor columns: μ_A(e_i) = Σ c · u⊗v.
#[derive(Clone, Debug)]
pub struct DiagonalMap {
    pub degree: i64,
    columns: Vec<Vec<(Scalar, ElemId, ElemId)>>,
}

impl DiagonalMap {
    pub fn of_basis(&self, i: ElemId) -> &[(Scalar, ElemId, ElemId)] {
        &self.columns[i]
    }

    pub fn of(&self, a: &Elt) -> Vec<(Scalar, ElemId, ElemId)> {
        let mut acc: BTreeMap<(ElemId, ElemId), Scalar> = BTreeMap::new();
        for (i, c) in a {
            for (k, u, v) in &self.columns[*i] {
                let e = acc.entry((*u, *v)).or_insert_with(|| int(0));
                *e += k * c;
            }
        }
        acc.into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((u, v), c)| (c, u, v))
            .collect()
    }

    /// (d⊗1 + 1⊗d)∘μ_A = (−1)^m μ_A∘d on all basis elements.
    fn check_chain_map(&self, pd: &PdModel) -> Result<()> {
        let alg = pd.algebra();
        for x in 0..alg.dim() {
            let mut acc: BTreeMap<(ElemId, ElemId), Scalar> = BTreeMap::new();
            let mut add = |u: ElemId, v: ElemId, c: Scalar| {
                if !c.is_zero() {
                    let e = acc.entry((u, v)).or_insert_with(|| int(0));
                    *e += c;
                }
            };
            for (c, u, v) in self.of_basis(x) {
                for (du, cu) in alg.d_basis(*u) {
                    add(*du, *v, c * cu);
                }
                let sign = if alg.degree(*u) % 2 != 0 { -1 } else { 1 };
                for (dv, cv) in alg.d_basis(*v) {
                    add(*u, *dv, c * cv * int(sign));
                }
            }
            let rhs_sign = if self.degree % 2 != 0 { -1 } else { 1 };
            for (c, u, v) in self.of(alg.d_basis(x)) {
                add(u, v, -c * int(rhs_sign));
            }
            if acc.values().any(|c| !c.is_zero()) {
                return Err(Error::Inconsistent(format!(
                    "diagonal map is not a chain map at {}",
                    alg.label(x)
                )));
            }
        }
        Ok(())
    }

    /// Graded bimodule identity on all basis triples: a degree-m module map
    /// picks up the Koszul factor when moved past the left argument,
    /// μ_A(a·x·b) = (−1)^{m|a|} a·μ_A(x)·b, with a·(u⊗v)·b = (a·u)⊗(v·b).
    fn check_bimodule(&self, pd: &PdModel) -> Result<()> {
        let alg = pd.algebra();
        let m = self.degree;
        for a in 0..alg.dim() {
            for x in 0..alg.dim() {
                for b in 0..alg.dim() {
                    let axb = alg.mul(&alg.mul(&vec![(a, int(1))], &vec![(x, int(1))]), &vec![(
                        b,
                        int(1),
                    )]);
                    let lhs = self.of(&axb);
                    let sign = if (m * alg.degree(a)) % 2 != 0 {
                        int(-1)
                    } else {
                        int(1)
                    };
                    let mut acc: BTreeMap<(ElemId, ElemId), Scalar> = BTreeMap::new();
                    for (c, u, v) in self.of_basis(x) {
                        for (au, cu) in alg.mul_basis(a, *u) {
                            for (vb, cv) in alg.mul_basis(*v, b) {
                                let e = acc.entry((*au, *vb)).or_insert_with(|| int(0));
                                *e += c * cu * cv * &sign;
                            }
                        }
                    }
                    let rhs: Vec<(Scalar, ElemId, ElemId)> = acc
                        .into_iter()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|((u, v), c)| (c, u, v))
                        .collect();
                    if lhs != rhs {
                        return Err(Error::Inconsistent(format!(
                            "bimodule identity fails at ({}, {}, {})",
                            alg.label(a),
                            alg.label(x),
                            alg.label(b)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin;

    fn s2() -> PdModel {
        builtin("S2").unwrap().pd
    }

    fn cp2() -> PdModel {
        builtin("CP2").unwrap().pd
    }

    #[test]
    fn sphere_cohomology_validates() {
        assert!(s2().validate().is_clean());
    }

    #[test]
    fn degree_violation_is_reported() {
        // x·x = 1 breaks degree homogeneity (2+2 ≠ 0)
        let alg = Cdga::new(CdgaData {
            basis: vec![("1".into(), 0), ("x".into(), 2)],
            unit: "1".into(),
            products: vec![("x".into(), "x".into(), vec![("1".into(), int(1))])],
            differential: vec![],
        })
        .unwrap();
        let report = alg.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom.contains("degree-homogeneous")));
    }

    #[test]
    fn broken_square_zero_is_reported_with_witness() {
        // d(x) = y, d(y) = z gives d² ≠ 0 at x
        let alg = Cdga::new(CdgaData {
            basis: vec![
                ("1".into(), 0),
                ("x".into(), 2),
                ("y".into(), 3),
                ("z".into(), 4),
            ],
            unit: "1".into(),
            products: vec![],
            differential: vec![
                ("x".into(), vec![("y".into(), int(1))]),
                ("y".into(), vec![("z".into(), int(1))]),
            ],
        })
        .unwrap();
        let report = alg.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| v.axiom == "d∘d = 0" && v.witness == "x"));
    }

    #[test]
    fn theta_on_s2() {
        let pd = s2();
        let theta = pd.duality_map().unwrap();
        // θ(1) = functional dual to x: block at degree 0 is [1]
        let b0 = theta.block(0).unwrap();
        assert_eq!(b0.column(0), &vec![(0, int(1))]);
        // θ(x) = functional dual to 1
        let b2 = theta.block(2).unwrap();
        assert_eq!(b2.column(0), &vec![(0, int(1))]);
    }

    #[test]
    fn theta_on_cp2() {
        let pd = cp2();
        let theta = pd.duality_map().unwrap();
        // θ(x) = functional dual to x since ∫(x·x) = 1
        let b2 = theta.block(2).unwrap();
        assert_eq!(b2.column(0), &vec![(0, int(1))]);
    }

    #[test]
    fn theta_is_bijective_per_degree() {
        for name in ["S2", "S3", "CP2", "S2xS3"] {
            let pd = builtin(name).unwrap().pd;
            let theta = pd.duality_map().unwrap();
            for k in pd.algebra().space().degrees().collect::<Vec<_>>() {
                let b = theta.block(k).unwrap();
                assert_eq!(b.rows, b.cols);
                assert_eq!(crate::exactlin::rank(b), b.cols, "{name} degree {k}");
            }
        }
    }

    #[test]
    fn diagonal_map_on_s2() {
        let pd = s2();
        let mu = pd.diagonal_map().unwrap();
        let alg = pd.algebra();
        let one = alg.unit();
        let x = alg.basis_of_degree(2)[0];
        // frozen from the hand solve of (θ⊗θ)μ_A = μ^∨θ on the 2-dim algebra
        assert_eq!(mu.of_basis(one), &[(int(1), one, x), (int(1), x, one)]);
        assert_eq!(mu.of_basis(x), &[(int(1), x, x)]);
    }

    #[test]
    fn diagonal_map_on_cp2() {
        let pd = cp2();
        let mu = pd.diagonal_map().unwrap();
        let alg = pd.algebra();
        let one = alg.unit();
        let x = alg.basis_of_degree(2)[0];
        let x2 = alg.basis_of_degree(4)[0];
        assert_eq!(
            mu.of_basis(one),
            &[(int(1), one, x2), (int(1), x, x), (int(1), x2, one)]
        );
    }

    #[test]
    fn euler_characteristic_sanity() {
        // μ∘μ_A(1) = χ(M)·top-ish: 2x for S², 3x² for CP²
        let pd = s2();
        let mu = pd.diagonal_map().unwrap();
        let alg = pd.algebra();
        let mut acc: Elt = Vec::new();
        for (c, u, v) in mu.of_basis(alg.unit()) {
            acc = sv_add_scaled(&acc, alg.mul_basis(*u, *v), c);
        }
        let x = alg.basis_of_degree(2)[0];
        assert_eq!(acc, vec![(x, int(2))]);

        let pd = cp2();
        let mu = pd.diagonal_map().unwrap();
        let alg = pd.algebra();
        let mut acc: Elt = Vec::new();
        for (c, u, v) in mu.of_basis(alg.unit()) {
            acc = sv_add_scaled(&acc, alg.mul_basis(*u, *v), c);
        }
        let x2 = alg.basis_of_degree(4)[0];
        assert_eq!(acc, vec![(x2, int(3))]);
    }

    #[test]
    fn tensor_of_spheres() {
        let s2 = s2();
        let s3 = builtin("S3").unwrap().pd;
        let t = s2.tensor(&s3).unwrap();
        assert_eq!(t.dimension, 5);
        assert!(t.validate().is_clean());
        // Künneth count for S²⊗S²: degree 2 has dimension 2
        let t22 = s2.tensor(&s2).unwrap();
        assert_eq!(t22.algebra().basis_of_degree(2).len(), 2);
        assert!(t22.validate().is_clean());
    }
}
