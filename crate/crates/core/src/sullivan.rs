//! Sullivan models and the free loop space pipeline.
//!
//! From a Sullivan model `(⋀V, d)` with generators in degrees ≥ 2 this module
//! builds the free loop model `(⋀V ⊗ ⋀V̄, d̄)` with `|v̄| = |v|−1`,
//! `d̄v = dv` and `d̄v̄ = −S(dv)`, where `S` is the degree −1 derivation with
//! `S(v) = v̄`, `S(v̄) = 0` that models the circle action.  The word length in
//! the barred generators grades the model, `G^p = ⋀V ⊗ ⋀^p V̄`, and the
//! differential preserves each `G^p`; per-`(n,p)` homology is the Hodge
//! table.
//!
//! The comparison map from the Hochschild chain complex of (a degree
//! truncation of) `⋀V`,
//!
//! ```text
//! f(a⊗[a₁|…|a_n]) = (1/n!) · a · S(a₁) ⋯ S(a_n),
//! ```
//!
//! is a quasi-isomorphism intertwining the rotation operator with `S`:
//! `f∘∂ = d̄∘f` and `f∘B = S∘f`, both checked exactly.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::cdga::{Cdga, CdgaData, ValidationReport, Violation};
use crate::exactlin::{
    factorial, int, Complex, DegreeMap, GradedSpace, Scalar, SparseMatrix,
    SparseVec,
};
use crate::hochschild::HochschildComplex;
use crate::{Error, Result};

/// Monomial in a free graded-commutative algebra: exponents aligned with a
/// generator list; odd generators square to zero so their exponents are ≤ 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub exps: Vec<u32>,
}

impl Monomial {
    pub fn one(n_gens: usize) -> Self {
        Monomial {
            exps: vec![0; n_gens],
        }
    }

    pub fn generator(n_gens: usize, i: usize) -> Self {
        let mut m = Monomial::one(n_gens);
        m.exps[i] = 1;
        m
    }

    pub fn degree(&self, degrees: &[i64]) -> i64 {
        self.exps
            .iter()
            .zip(degrees)
            .map(|(e, d)| i64::from(*e) * d)
            .sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|e| *e == 0)
    }

    pub fn label(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(names[i].clone()),
                _ => parts.push(format!("{}^{}", names[i], e)),
            }
        }
        parts.join("*")
    }
}

/// Graded-commutative product of monomials in canonical order.  Returns the
/// Koszul sign of sorting the concatenation, or `None` when an odd generator
/// squares.
pub fn mono_mul(degrees: &[i64], a: &Monomial, b: &Monomial) -> Option<(i64, Monomial)> {
    let mut exps = Vec::with_capacity(degrees.len());
    let mut exponent = 0i64;
    // odd letters of `a` strictly after position j, for the sorting sign
    let mut odd_after = vec![0i64; degrees.len()];
    let mut acc = 0i64;
    for j in (0..degrees.len()).rev() {
        odd_after[j] = acc;
        if degrees[j] % 2 != 0 && a.exps[j] > 0 {
            acc += 1;
        }
    }
    for j in 0..degrees.len() {
        let (ea, eb) = (a.exps[j], b.exps[j]);
        if degrees[j] % 2 != 0 {
            if ea + eb > 1 {
                return None;
            }
            if eb == 1 {
                exponent += odd_after[j];
            }
        }
        exps.push(ea + eb);
    }
    let sign = if exponent % 2 != 0 { -1 } else { 1 };
    Some((sign, Monomial { exps }))
}

/// Polynomial: sparse scalar combination of monomials.
pub type Poly = BTreeMap<Monomial, Scalar>;

pub fn poly_add_scaled(a: &mut Poly, b: &Poly, c: &Scalar) {
    for (m, v) in b {
        let e = a.entry(m.clone()).or_insert_with(|| int(0));
        *e += v * c;
    }
    a.retain(|_, v| !v.is_zero());
}

pub fn poly_mul(degrees: &[i64], a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            if let Some((sign, m)) = mono_mul(degrees, ma, mb) {
                let e = out.entry(m).or_insert_with(|| int(0));
                *e += ca * cb * int(sign);
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Applies an odd derivation given by generator images, by the Leibniz rule
/// over the canonical letter expansion of the monomial.
pub fn derivation_apply(degrees: &[i64], images: &[Poly], m: &Monomial) -> Poly {
    let mut out = Poly::new();
    let mut prefix_degree = 0i64;
    for i in 0..degrees.len() {
        let e = m.exps[i];
        if e > 0 && !images[i].is_empty() {
            // remove one occurrence of generator i; for even generators all
            // occurrences contribute identically, giving the factor e
            let mut rest = m.clone();
            rest.exps[i] -= 1;
            let mut prefix = Monomial::one(degrees.len());
            prefix.exps[..i].copy_from_slice(&m.exps[..i]);
            let mut suffix = rest.clone();
            suffix.exps[..i].fill(0);

            let mut term = Poly::new();
            term.insert(prefix, int(1));
            let term = poly_mul(degrees, &term, &images[i]);
            let mut suffix_poly = Poly::new();
            suffix_poly.insert(suffix, int(1));
            let term = poly_mul(degrees, &term, &suffix_poly);

            let mut coeff = int(i64::from(e));
            if prefix_degree % 2 != 0 {
                coeff = -coeff;
            }
            poly_add_scaled(&mut out, &term, &coeff);
        }
        prefix_degree += i64::from(e) * degrees[i];
    }
    out
}

/// Sullivan model `(⋀V, d)`: free graded-commutative algebra on generators of
/// degree ≥ 2 with a decomposable differential given on generators.
#[derive(Clone, Debug)]
pub struct SullivanModel {
    /// Sorted by (degree, name); this order is the monomial normal form.
    generators: Vec<(String, i64)>,
    diff: Vec<Poly>,
}

/// Differential data on generator names: (generator, Σ coeff·monomial) with
/// monomials given as letter lists.
pub type GeneratorDifferential = Vec<(String, Vec<(Vec<String>, Scalar)>)>;

impl SullivanModel {
    pub fn new(
        mut generators: Vec<(String, i64)>,
        differential: GeneratorDifferential,
    ) -> Result<SullivanModel> {
        generators.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        let names: Vec<String> = generators.iter().map(|(n, _)| n.clone()).collect();
        let degrees: Vec<i64> = generators.iter().map(|(_, d)| *d).collect();
        {
            let mut seen = std::collections::HashSet::new();
            for n in &names {
                if !seen.insert(n) {
                    return Err(Error::InvalidModel(format!("duplicate generator `{n}`")));
                }
            }
        }
        let find = |name: &str| -> Result<usize> {
            names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::InvalidModel(format!("unknown generator `{name}`")))
        };
        let mut diff = vec![Poly::new(); generators.len()];
        for (gen, value) in differential {
            let g = find(&gen)?;
            let mut poly = Poly::new();
            for (mono_names, coeff) in value {
                let mut m = Monomial::one(generators.len());
                let mut sign = 1i64;
                // multiply the listed letters left to right
                for name in &mono_names {
                    let i = find(name)?;
                    let letter = Monomial::generator(generators.len(), i);
                    match mono_mul(&degrees, &m, &letter) {
                        Some((s, out)) => {
                            sign *= s;
                            m = out;
                        }
                        None => {
                            sign = 0;
                            break;
                        }
                    }
                }
                if sign != 0 {
                    let e = poly.entry(m).or_insert_with(|| int(0));
                    *e += coeff * int(sign);
                }
            }
            poly.retain(|_, v| !v.is_zero());
            diff[g] = poly;
        }
        Ok(SullivanModel {
            generators,
            diff,
        })
    }

    pub fn generators(&self) -> &[(String, i64)] {
        &self.generators
    }

    pub fn names(&self) -> Vec<String> {
        self.generators.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.generators.iter().map(|(_, d)| *d).collect()
    }

    pub fn differential(&self, i: usize) -> &Poly {
        &self.diff[i]
    }

    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let degrees = self.degrees();
        let names = self.names();
        for (i, (name, d)) in self.generators.iter().enumerate() {
            if *d < 2 {
                report.violations.push(Violation {
                    axiom: "1-connected input required: generator degrees must be ≥ 2".into(),
                    witness: name.clone(),
                });
            }
            for m in self.diff[i].keys() {
                if m.degree(&degrees) != d + 1 {
                    report.violations.push(Violation {
                        axiom: "differential must raise degree by 1".into(),
                        witness: format!("d({name}) ∋ {}", m.label(&names)),
                    });
                }
            }
        }
        if report.is_clean() {
            for (i, (name, _)) in self.generators.iter().enumerate() {
                let mut dd = Poly::new();
                for (m, c) in &self.diff[i] {
                    let t = derivation_apply(&degrees, &self.diff, m);
                    poly_add_scaled(&mut dd, &t, c);
                }
                if !dd.is_empty() {
                    report.violations.push(Violation {
                        axiom: "d∘d = 0".into(),
                        witness: name.clone(),
                    });
                }
            }
        }
        report
    }

    /// Monomial basis per degree `0..=n_max`.
    pub fn monomial_basis(&self, n_max: i64) -> BTreeMap<i64, Vec<Monomial>> {
        monomial_basis(&self.degrees(), n_max)
    }

    /// The degree truncation `⋀V^{≤top}` as a table-based CDGA, with the
    /// monomial behind each basis id.  Products landing above `top` are zero.
    pub fn truncated_cdga(&self, top: i64) -> Result<(Cdga, Vec<Monomial>)> {
        let degrees = self.degrees();
        let names = self.names();
        let basis_by_degree = self.monomial_basis(top);
        let mut monomials: Vec<Monomial> = Vec::new();
        for level in basis_by_degree.values() {
            monomials.extend(level.iter().cloned());
        }
        let label = |m: &Monomial| m.label(&names);
        let basis: Vec<(String, i64)> = monomials
            .iter()
            .map(|m| (label(m), m.degree(&degrees)))
            .collect();
        let mut products = Vec::new();
        for a in &monomials {
            for b in &monomials {
                if a.degree(&degrees) + b.degree(&degrees) > top {
                    continue;
                }
                if let Some((sign, m)) = mono_mul(&degrees, a, b) {
                    products.push((label(a), label(b), vec![(label(&m), int(sign))]));
                }
            }
        }
        let mut differential = Vec::new();
        for m in &monomials {
            let dm = derivation_apply(&degrees, &self.diff, m);
            let value: Vec<(String, Scalar)> = dm
                .iter()
                .filter(|(t, _)| t.degree(&degrees) <= top)
                .map(|(t, c)| (label(t), c.clone()))
                .collect();
            if !value.is_empty() {
                differential.push((label(m), value));
            }
        }
        let cdga = Cdga::new(CdgaData {
            basis,
            unit: "1".into(),
            products,
            differential,
        })?;
        // Cdga sorts its basis by (degree, label); align the monomial list
        let mut aligned = vec![Monomial::one(degrees.len()); monomials.len()];
        for m in &monomials {
            let id = cdga
                .basis_of_degree(m.degree(&degrees))
                .iter()
                .copied()
                .find(|&i| cdga.label(i) == label(m))
                .expect("monomial in truncated basis");
            aligned[id] = m.clone();
        }
        Ok((cdga, aligned))
    }
}

fn monomial_basis(degrees: &[i64], n_max: i64) -> BTreeMap<i64, Vec<Monomial>> {
    let mut by_degree: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
    for n in 0..=n_max {
        by_degree.insert(n, Vec::new());
    }
    let mut pool = vec![Monomial::one(degrees.len())];
    // extend generator by generator, keeping degree ≤ n_max
    for i in 0..degrees.len() {
        let mut next = Vec::new();
        for m in &pool {
            let base = m.degree(degrees);
            let max_e = if degrees[i] % 2 != 0 {
                1
            } else {
                ((n_max - base) / degrees[i].max(1)).max(0)
            };
            for e in 0..=max_e {
                if base + e * degrees[i] > n_max {
                    break;
                }
                let mut t = m.clone();
                t.exps[i] = e as u32;
                next.push(t);
            }
        }
        pool = next;
    }
    for m in pool {
        by_degree.entry(m.degree(degrees)).or_default().push(m);
    }
    for level in by_degree.values_mut() {
        level.sort();
    }
    by_degree
}

/// The free loop model `(⋀V ⊗ ⋀V̄, d̄)` with the circle-action derivation `S`.
#[derive(Clone, Debug)]
pub struct FreeLoopModel {
    /// All generators in canonical (degree, name) order.
    names: Vec<String>,
    degrees: Vec<i64>,
    /// Bar weight contribution of each generator (1 for barred ones).
    barred: Vec<bool>,
    dbar: Vec<Poly>,
    s_images: Vec<Poly>,
}

impl FreeLoopModel {
    /// Extends the base model by barred generators `v̄` of degree `|v|−1` and
    /// the differential `d̄v̄ = −S(dv)`.  Rejects invalid base models and
    /// verifies `d̄² = 0`, `S² = 0` and `Sd̄ + d̄S = 0` on all generators.
    pub fn build(base: &SullivanModel) -> Result<FreeLoopModel> {
        let report = base.validate();
        if !report.is_clean() {
            return Err(Error::InvalidModel(format!(
                "Sullivan model fails validation: {}",
                report.violations[0]
            )));
        }
        let n_base = base.generators.len();
        let mut gens: Vec<(String, i64, bool, usize)> = Vec::new();
        for (i, (name, d)) in base.generators.iter().enumerate() {
            gens.push((name.clone(), *d, false, i));
            gens.push((format!("{name}_bar"), d - 1, true, i));
        }
        gens.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        let names: Vec<String> = gens.iter().map(|g| g.0.clone()).collect();
        let degrees: Vec<i64> = gens.iter().map(|g| g.1).collect();
        let barred: Vec<bool> = gens.iter().map(|g| g.2).collect();

        // positions of v and v̄ in the big ordering, per base index
        let mut plain_pos = vec![0usize; n_base];
        let mut bar_pos = vec![0usize; n_base];
        for (pos, (_, _, is_bar, i)) in gens.iter().enumerate() {
            if *is_bar {
                bar_pos[*i] = pos;
            } else {
                plain_pos[*i] = pos;
            }
        }

        let lift = |p: &Poly| -> Poly {
            let mut out = Poly::new();
            for (m, c) in p {
                let mut t = Monomial::one(names.len());
                for (i, e) in m.exps.iter().enumerate() {
                    t.exps[plain_pos[i]] = *e;
                }
                out.insert(t, c.clone());
            }
            out
        };

        let mut s_images = vec![Poly::new(); names.len()];
        for i in 0..n_base {
            let mut p = Poly::new();
            p.insert(Monomial::generator(names.len(), bar_pos[i]), int(1));
            s_images[plain_pos[i]] = p;
        }

        let mut dbar = vec![Poly::new(); names.len()];
        for i in 0..n_base {
            let dv = lift(&base.diff[i]);
            dbar[plain_pos[i]] = dv.clone();
            // d̄(v̄) = −S(dv)
            let mut s_dv = Poly::new();
            for (m, c) in &dv {
                let t = derivation_apply(&degrees, &s_images, m);
                poly_add_scaled(&mut s_dv, &t, c);
            }
            let mut neg = Poly::new();
            poly_add_scaled(&mut neg, &s_dv, &int(-1));
            dbar[bar_pos[i]] = neg;
        }

        let model = FreeLoopModel {
            names,
            degrees,
            barred,
            dbar,
            s_images,
        };
        model.check_generator_identities()?;
        Ok(model)
    }

    fn check_generator_identities(&self) -> Result<()> {
        for i in 0..self.names.len() {
            let g = Monomial::generator(self.names.len(), i);
            if !self.apply(&self.apply_once(&g, &self.dbar), &self.dbar).is_empty() {
                return Err(Error::Inconsistent(format!(
                    "d̄² ≠ 0 at generator {}",
                    self.names[i]
                )));
            }
            if !self
                .apply(&self.apply_once(&g, &self.s_images), &self.s_images)
                .is_empty()
            {
                return Err(Error::Inconsistent(format!(
                    "S² ≠ 0 at generator {}",
                    self.names[i]
                )));
            }
            let mut anti = self.apply(&self.apply_once(&g, &self.dbar), &self.s_images);
            poly_add_scaled(
                &mut anti,
                &self.apply(&self.apply_once(&g, &self.s_images), &self.dbar),
                &int(1),
            );
            if !anti.is_empty() {
                return Err(Error::Inconsistent(format!(
                    "Sd̄ + d̄S ≠ 0 at generator {}",
                    self.names[i]
                )));
            }
        }
        Ok(())
    }

    fn apply_once(&self, m: &Monomial, images: &[Poly]) -> Poly {
        derivation_apply(&self.degrees, images, m)
    }

    fn apply(&self, p: &Poly, images: &[Poly]) -> Poly {
        let mut out = Poly::new();
        for (m, c) in p {
            let t = derivation_apply(&self.degrees, images, m);
            poly_add_scaled(&mut out, &t, c);
        }
        out
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn generator_degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn apply_dbar(&self, m: &Monomial) -> Poly {
        self.apply_once(m, &self.dbar)
    }

    pub fn apply_s(&self, m: &Monomial) -> Poly {
        self.apply_once(m, &self.s_images)
    }

    pub fn apply_s_poly(&self, p: &Poly) -> Poly {
        self.apply(p, &self.s_images)
    }

    /// Hodge weight: word length in the barred generators.
    pub fn bar_weight(&self, m: &Monomial) -> i64 {
        m.exps
            .iter()
            .zip(&self.barred)
            .filter(|(_, b)| **b)
            .map(|(e, _)| i64::from(*e))
            .sum()
    }

    pub fn monomial_basis(&self, n_max: i64) -> BTreeMap<i64, Vec<Monomial>> {
        monomial_basis(&self.degrees, n_max)
    }

    /// Materializes the complex on monomials of degree ≤ `n_max + 1` with
    /// differential blocks through `n_max`, plus the `S` operator on the full
    /// stored range.  Returns the basis, complex and `S` map.
    pub fn complex(&self, n_max: i64) -> LoopModelComplex {
        let basis = self.monomial_basis(n_max + 1);
        let mut degrees_map = BTreeMap::new();
        for (n, level) in &basis {
            degrees_map.insert(
                *n,
                level
                    .iter()
                    .map(|m| m.label(&self.names))
                    .collect::<Vec<_>>(),
            );
        }
        let space = Arc::new(GradedSpace::new(degrees_map));
        let index = |n: i64, m: &Monomial| -> usize {
            basis[&n].binary_search(m).expect("monomial in basis")
        };
        let poly_to_vec = |p: &Poly, n: i64| -> SparseVec {
            let mut v: SparseVec = p
                .iter()
                .map(|(m, c)| (index(n, m), c.clone()))
                .collect();
            v.sort_by_key(|(i, _)| *i);
            v
        };

        let mut dbar = DegreeMap::zero(space.clone(), space.clone(), 1);
        for n in 0..=n_max {
            let level = &basis[&n];
            let mut block = SparseMatrix::zero(space.dim(n + 1), level.len());
            for (j, m) in level.iter().enumerate() {
                block.set_column(j, poly_to_vec(&self.apply_dbar(m), n + 1));
            }
            dbar.insert_block(n, block);
        }

        let mut s_map = DegreeMap::zero(space.clone(), space.clone(), -1);
        for n in 0..=n_max + 1 {
            let level = &basis[&n];
            let rows = space.dim(n - 1);
            let mut block = SparseMatrix::zero(rows, level.len());
            for (j, m) in level.iter().enumerate() {
                block.set_column(j, poly_to_vec(&self.apply_s(m), n - 1));
            }
            s_map.insert_block(n, block);
        }

        let complex = Complex::new(space, dbar);
        if let Err((n, j)) = complex.check_square_zero() {
            panic!(
                "d̄² ≠ 0 at {} despite generator-level checks",
                self.monomial_basis(n_max + 1)[&n][j].label(&self.names)
            );
        }
        LoopModelComplex {
            basis,
            complex,
            s_map,
        }
    }
}

/// Materialized free loop complex: monomial basis, `d̄` and `S`.
#[derive(Clone, Debug)]
pub struct LoopModelComplex {
    pub basis: BTreeMap<i64, Vec<Monomial>>,
    pub complex: Complex,
    pub s_map: DegreeMap,
}

/// Hodge table `(n, p) ↦ dim H^n(G^p)` for `n ≤ n_max`.
#[derive(Clone, Debug)]
pub struct HodgeTable {
    pub n_max: i64,
    pub dims: BTreeMap<(i64, i64), usize>,
}

impl HodgeTable {
    pub fn dim(&self, n: i64, p: i64) -> usize {
        self.dims.get(&(n, p)).copied().unwrap_or(0)
    }

    pub fn row_sum(&self, n: i64) -> usize {
        self.dims
            .iter()
            .filter(|((nn, _), _)| *nn == n)
            .map(|(_, d)| d)
            .sum()
    }

    pub fn max_weight(&self) -> i64 {
        self.dims.keys().map(|(_, p)| *p).max().unwrap_or(0)
    }
}

/// Per-weight subcomplexes `G^p` and their homology dimensions.
///
/// `d̄`-stability of each `G^p` is asserted basis-wise while building.
pub fn hodge_table(model: &FreeLoopModel, n_max: i64) -> Result<HodgeTable> {
    let mut dims = BTreeMap::new();
    for p in 0.. {
        let sub = weight_subcomplex(model, n_max, p)?;
        let Some(sub) = sub else { break };
        for n in 0..=n_max {
            let h = sub.homology(n)?;
            if h.dim > 0 {
                dims.insert((n, p), h.dim);
            }
        }
    }
    Ok(HodgeTable { n_max, dims })
}

/// The subcomplex `G^p`, or `None` when it has no monomials of degree
/// ≤ `n_max + 1`.
pub fn weight_subcomplex(
    model: &FreeLoopModel,
    n_max: i64,
    p: i64,
) -> Result<Option<Complex>> {
    let basis = model.monomial_basis(n_max + 1);
    let mut sub_basis: BTreeMap<i64, Vec<Monomial>> = BTreeMap::new();
    let mut nonempty = false;
    for (n, level) in &basis {
        let filtered: Vec<Monomial> = level
            .iter()
            .filter(|m| model.bar_weight(m) == p)
            .cloned()
            .collect();
        nonempty |= !filtered.is_empty();
        sub_basis.insert(*n, filtered);
    }
    if !nonempty {
        return Ok(None);
    }
    let mut degrees_map = BTreeMap::new();
    for (n, level) in &sub_basis {
        degrees_map.insert(
            *n,
            level
                .iter()
                .map(|m| m.label(model.names()))
                .collect::<Vec<_>>(),
        );
    }
    let space = Arc::new(GradedSpace::new(degrees_map));
    let mut dbar = DegreeMap::zero(space.clone(), space.clone(), 1);
    for n in 0..=n_max {
        let level = &sub_basis[&n];
        let target = &sub_basis[&(n + 1)];
        let mut block = SparseMatrix::zero(target.len(), level.len());
        for (j, m) in level.iter().enumerate() {
            let dm = model.apply_dbar(m);
            let mut col: SparseVec = Vec::new();
            for (t, c) in &dm {
                let i = target.binary_search(t).map_err(|_| {
                    Error::Inconsistent(format!(
                        "d̄ leaves G^{p} at {}",
                        m.label(model.names())
                    ))
                })?;
                col.push((i, c.clone()));
            }
            col.sort_by_key(|(i, _)| *i);
            block.set_column(j, col);
        }
        dbar.insert_block(n, block);
    }
    let complex = Complex::new(space, dbar);
    if let Err((n, j)) = complex.check_square_zero() {
        return Err(Error::Inconsistent(format!(
            "d̄² ≠ 0 on G^{p} at degree {n}, index {j}"
        )));
    }
    Ok(Some(complex))
}

/// The comparison map from the Hochschild chain complex of the truncated
/// `⋀V` to the free loop model, with every exactness check it must satisfy.
#[derive(Debug)]
pub struct ComparisonMap {
    /// Hochschild side, built to homology depth `n_max`.
    pub hochschild: HochschildComplex,
    /// Monomial behind each algebra basis id of the truncated CDGA.
    pub monomials: Vec<Monomial>,
    /// Free loop side.
    pub loop_complex: LoopModelComplex,
    pub free_loop: FreeLoopModel,
    /// The map itself, degree 0, from chain words to monomials.
    pub map: DegreeMap,
}

/// Builds `f(a⊗[a₁|…|a_n]) = (1/n!) a·S(a₁)⋯S(a_n)` on the stored range.
///
/// The truncation of `⋀V` at degree `n_max + 3` leaves the stored part of the
/// chain complex (degrees ≤ `n_max + 1`) identical to the untruncated one:
/// heads and letters of a word of degree D have degree ≤ D + 1, and every
/// product or differential formed by `∂` stays below the cutoff.
pub fn comparison_map(base: &SullivanModel, n_max: i64) -> Result<ComparisonMap> {
    let (cdga, monomials) = base.truncated_cdga(n_max + 3)?;
    let hochschild = HochschildComplex::build(Arc::new(cdga), n_max)?;
    let free_loop = FreeLoopModel::build(base)?;
    let loop_complex = free_loop.complex(n_max);

    let base_degrees = base.degrees();
    let n_plain = base_degrees.len();
    // re-index base monomials into the free loop generator order
    let plain_pos: Vec<usize> = (0..n_plain)
        .map(|i| {
            let name = &base.generators[i].0;
            free_loop
                .names()
                .iter()
                .position(|n| n == name)
                .expect("base generator inside free loop model")
        })
        .collect();
    let lift = |m: &Monomial| -> Monomial {
        let mut t = Monomial::one(free_loop.names().len());
        for (i, e) in m.exps.iter().enumerate() {
            t.exps[plain_pos[i]] = *e;
        }
        t
    };

    let degrees = free_loop.generator_degrees().to_vec();
    let space = hochschild.complex().space().clone();
    let target = loop_complex.complex.space().clone();
    let mut map = DegreeMap::zero(space.clone(), target.clone(), 0);
    for n in 0..=n_max + 1 {
        let words = hochschild.words(n);
        let mut block = SparseMatrix::zero(target.dim(n), words.len());
        for (j, w) in words.iter().enumerate() {
            let mut acc = Poly::new();
            acc.insert(lift(&monomials[w.head]), int(1));
            for l in &w.letters {
                let s = free_loop.apply_s(&lift(&monomials[*l]));
                acc = poly_mul(&degrees, &acc, &s);
            }
            let coeff = factorial(w.letters.len()).recip();
            let level = &loop_complex.basis[&n];
            let mut col: SparseVec = Vec::new();
            for (m, c) in &acc {
                let i = level.binary_search(m).expect("monomial in loop basis");
                col.push((i, c * &coeff));
            }
            col.sort_by_key(|(i, _)| *i);
            block.set_column(j, col);
        }
        map.insert_block(n, block);
    }

    Ok(ComparisonMap {
        hochschild,
        monomials,
        loop_complex,
        free_loop,
        map,
    })
}

impl ComparisonMap {
    /// `f∘∂ = d̄∘f` on the stored range; returns a witness label on failure.
    pub fn check_chain_map(&self) -> std::result::Result<(), String> {
        let defect = self.map.chain_defect(
            self.hochschild.complex().differential(),
            self.loop_complex.complex.differential(),
        );
        match defect.first_nonzero() {
            None => Ok(()),
            Some((n, j)) => Err(format!(
                "f∘∂ ≠ d̄∘f at {}",
                self.hochschild.words(n)[j].label(self.hochschild.algebra())
            )),
        }
    }

    /// `f∘B = S∘f` on the stored range.
    pub fn check_intertwines_rotation(&self) -> std::result::Result<(), String> {
        for n in self
            .hochschild
            .connes()
            .block_range()
            .collect::<Vec<_>>()
        {
            if self.map.block(n).is_none() || self.map.block(n - 1).is_none() {
                continue;
            }
            let words = self.hochschild.words(n);
            for (j, w) in words.iter().enumerate() {
                let v = vec![(j, int(1))];
                let fb = self.map.apply(n - 1, &self.hochschild.connes().apply(n, &v));
                let sf = self
                    .loop_complex
                    .s_map
                    .apply(n, &self.map.apply(n, &v));
                if fb != sf {
                    return Err(format!(
                        "f∘B ≠ S∘f at {}",
                        w.label(self.hochschild.algebra())
                    ));
                }
            }
        }
        Ok(())
    }

    /// `H(f)` is bijective in degrees ≤ `n_max − 1` (rank equality both ways).
    pub fn check_quasi_iso(&self, n_max: i64) -> std::result::Result<(), String> {
        for n in 0..=n_max - 1 {
            let hs = self
                .hochschild
                .complex()
                .homology(n)
                .map_err(|e| e.to_string())?;
            let ht = self
                .loop_complex
                .complex
                .homology(n)
                .map_err(|e| e.to_string())?;
            if hs.dim != ht.dim {
                return Err(format!(
                    "H^{n} dims differ: chain side {} vs loop model {}",
                    hs.dim, ht.dim
                ));
            }
            let mut matrix = SparseMatrix::zero(ht.dim, hs.dim);
            for (j, rep) in hs.reps.iter().enumerate() {
                let image = self.map.apply(n, rep);
                let coords = ht.project(&image);
                let col: SparseVec = coords
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                matrix.set_column(j, col);
            }
            if crate::exactlin::rank(&matrix) != hs.dim {
                return Err(format!("H^{n}(f) is not an isomorphism"));
            }
        }
        Ok(())
    }
}

/// Chain-level Hodge shift checks on the Sullivan side, plus optional
/// Hochschild-side filtration checks when a duality model is available.
#[derive(Clone, Debug, Default)]
pub struct HodgeShiftReport {
    pub failures: Vec<String>,
}

impl HodgeShiftReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn hodge_shift_report(
    model: &FreeLoopModel,
    pd: Option<&crate::cdga::PdModel>,
    n_max: i64,
) -> Result<HodgeShiftReport> {
    let mut report = HodgeShiftReport::default();
    let basis = model.monomial_basis(n_max + 1);

    // (i) S raises the bar weight by exactly one, basis-wise
    for level in basis.values() {
        for m in level {
            let p = model.bar_weight(m);
            for t in model.apply_s(m).keys() {
                if model.bar_weight(t) != p + 1 {
                    report
                        .failures
                        .push(format!("S(G^{p}) ⊄ G^{} at {}", p + 1, m.label(model.names())));
                }
            }
        }
    }

    // (ii) induced map on homology: S carries H^n(G^p) into H^{n−1}(G^{p+1});
    // representatives map to cocycles of the next weight
    for p in 0.. {
        let Some(sub) = weight_subcomplex(model, n_max, p)? else {
            break;
        };
        for n in 0..=n_max {
            let h = sub.homology(n)?;
            for rep in &h.reps {
                // expand the weight-p representative into full monomials
                let level: Vec<&Monomial> = basis[&n]
                    .iter()
                    .filter(|m| model.bar_weight(m) == p)
                    .collect();
                let mut image = Poly::new();
                for (i, c) in rep {
                    poly_add_scaled(&mut image, &model.apply_s(level[*i]), c);
                }
                for t in image.keys() {
                    if model.bar_weight(t) != p + 1 {
                        report.failures.push(format!(
                            "homology-level S leaves weight {} at degree {n}",
                            p + 1
                        ));
                    }
                }
                let mut ds = Poly::new();
                for (m, c) in &image {
                    poly_add_scaled(&mut ds, &model.apply_dbar(m), c);
                }
                if !ds.is_empty() {
                    report
                        .failures
                        .push(format!("S of a cocycle is not a cocycle at (n={n}, p={p})"));
                }
            }
        }
    }

    // (iii) Hochschild-side filtration avatars
    if let Some(pd) = pd {
        if let Err(e) = crate::hochschild::verify_chain_identities(pd.algebra(), n_max) {
            report.failures.push(e);
        }
        if let Err(e) = crate::stringtop::verify_phi(pd, n_max) {
            report.failures.push(e);
        }
    }

    Ok(report)
}

/// Betti numbers of the free loop space from the Sullivan side: `dim H^n` of
/// the full free loop model.
pub fn loop_space_betti(model: &FreeLoopModel, n_max: i64) -> Result<Vec<(i64, usize)>> {
    let lc = model.complex(n_max);
    let mut out = Vec::new();
    for n in 0..=n_max {
        out.push((n, lc.complex.homology(n)?.dim));
    }
    Ok(out)
}

/// Per-degree Betti agreement between the Hochschild pipeline of `pd` and the
/// Sullivan pipeline of `base`, for `n ≤ n_max`.
pub fn cross_pipeline_betti(
    pd: &crate::cdga::PdModel,
    base: &SullivanModel,
    n_max: i64,
) -> Result<Vec<(i64, usize, usize)>> {
    let hc = HochschildComplex::build(Arc::new(pd.algebra().clone()), n_max)?;
    let flm = FreeLoopModel::build(base)?;
    let sullivan = loop_space_betti(&flm, n_max)?;
    let mut out = Vec::new();
    for (n, s_dim) in sullivan {
        let h_dim = hc.complex().homology(n)?.dim;
        out.push((n, h_dim, s_dim));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin;

    fn s2_model() -> SullivanModel {
        builtin("S2").unwrap().sullivan
    }

    #[test]
    fn free_loop_differential_on_s2() {
        // base ⋀(x₂, y₃), dy = x²: d̄(ȳ) = −S(x²) = −2x·x̄, d̄(x̄) = 0
        let flm = FreeLoopModel::build(&s2_model()).unwrap();
        let names = flm.names().to_vec();
        let find = |n: &str| names.iter().position(|m| m == n).unwrap();
        let (x, xb, yb) = (find("x"), find("x_bar"), find("y_bar"));
        let dyb = flm.apply_dbar(&Monomial::generator(names.len(), yb));
        assert_eq!(dyb.len(), 1);
        let (m, c) = dyb.iter().next().unwrap();
        assert_eq!(*c, int(-2));
        assert_eq!(m.exps[x], 1);
        assert_eq!(m.exps[xb], 1);
        assert!(flm
            .apply_dbar(&Monomial::generator(names.len(), xb))
            .is_empty());
    }

    #[test]
    fn odd_sphere_free_loop_model_has_zero_differential() {
        let s3 = builtin("S3").unwrap().sullivan;
        let flm = FreeLoopModel::build(&s3).unwrap();
        for i in 0..flm.names().len() {
            assert!(flm
                .apply_dbar(&Monomial::generator(flm.names().len(), i))
                .is_empty());
        }
    }

    #[test]
    fn s_operator_examples() {
        let flm = FreeLoopModel::build(&s2_model()).unwrap();
        let names = flm.names().to_vec();
        let find = |n: &str| names.iter().position(|m| m == n).unwrap();
        let (x, xb, yb) = (find("x"), find("x_bar"), find("y_bar"));
        // S(x) = x̄
        let sx = flm.apply_s(&Monomial::generator(names.len(), x));
        assert_eq!(sx.len(), 1);
        assert!(sx.keys().next().unwrap().exps[xb] == 1);
        // S(x²) = 2x·x̄
        let mut x2 = Monomial::one(names.len());
        x2.exps[x] = 2;
        let sx2 = flm.apply_s(&x2);
        let (m, c) = sx2.iter().next().unwrap();
        assert_eq!(*c, int(2));
        assert_eq!((m.exps[x], m.exps[xb]), (1, 1));
        // S(x̄·ȳ) = 0
        let mut xbyb = Monomial::one(names.len());
        xbyb.exps[xb] = 1;
        xbyb.exps[yb] = 1;
        assert!(flm.apply_s(&xbyb).is_empty());
    }

    #[test]
    fn hodge_table_of_s2() {
        let flm = FreeLoopModel::build(&s2_model()).unwrap();
        let table = hodge_table(&flm, 8).unwrap();
        // H⁰ is the constants, concentrated in weight 0
        assert_eq!(table.dim(0, 0), 1);
        // H¹ is spanned by x̄, weight 1
        assert_eq!(table.dim(1, 1), 1);
        assert_eq!(table.row_sum(1), 1);
        // H³ is concentrated in weight 2 (class x̄ȳ)
        assert_eq!(table.dim(3, 2), 1);
        assert_eq!(table.row_sum(3), 1);
        // loop space of S² has one-dimensional cohomology in every degree
        for n in 0..=8 {
            assert_eq!(table.row_sum(n), 1, "row sum at degree {n}");
        }
    }

    #[test]
    fn betti_of_ls3() {
        // ⋀(x₃, x̄₂) with zero differential: one class when 2a+3ε = n
        let s3 = builtin("S3").unwrap().sullivan;
        let flm = FreeLoopModel::build(&s3).unwrap();
        let betti = loop_space_betti(&flm, 8).unwrap();
        let expect = [1, 0, 1, 1, 1, 1, 1, 1, 1];
        for (n, dim) in betti {
            assert_eq!(dim, expect[n as usize], "degree {n}");
        }
    }

    #[test]
    fn comparison_map_small_values() {
        let cm = comparison_map(&s2_model(), 6).unwrap();
        let alg = cm.hochschild.algebra();
        // f(1⊗[]) = 1
        let unit_word = crate::hochschild::Word::new(alg.unit(), vec![]);
        let (n, j) = cm.hochschild.index_of(&unit_word).unwrap();
        let image = cm.map.apply(n, &vec![(j, int(1))]);
        assert_eq!(image.len(), 1);
        assert!(cm.loop_complex.basis[&0][image[0].0].is_one());

        // f(x⊗[x]) = x·x̄ and f(1⊗[x|x]) = ½ x̄² = 0
        let x = alg
            .basis_of_degree(2)
            .iter()
            .copied()
            .find(|&i| alg.label(i) == "x")
            .unwrap();
        let w = crate::hochschild::Word::new(x, vec![x]);
        let (n, j) = cm.hochschild.index_of(&w).unwrap();
        let image = cm.map.apply(n, &vec![(j, int(1))]);
        assert_eq!(image.len(), 1);
        assert_eq!(image[0].1, int(1));
        let w = crate::hochschild::Word::new(alg.unit(), vec![x, x]);
        let (n, j) = cm.hochschild.index_of(&w).unwrap();
        assert!(cm.map.apply(n, &vec![(j, int(1))]).is_empty());
    }

    #[test]
    fn comparison_map_identities_on_s2() {
        let cm = comparison_map(&s2_model(), 6).unwrap();
        cm.check_chain_map().unwrap();
        cm.check_intertwines_rotation().unwrap();
        cm.check_quasi_iso(6).unwrap();
    }

    #[test]
    fn hodge_shift_on_s2() {
        let flm = FreeLoopModel::build(&s2_model()).unwrap();
        let pd = builtin("S2").unwrap().pd;
        let report = hodge_shift_report(&flm, Some(&pd), 6).unwrap();
        assert!(report.is_clean(), "{:?}", report.failures);
    }

    #[test]
    fn zero_differential_model_shift_is_degreewise() {
        let s3 = builtin("S3").unwrap().sullivan;
        let flm = FreeLoopModel::build(&s3).unwrap();
        let report = hodge_shift_report(&flm, None, 6).unwrap();
        assert!(report.is_clean());
    }

    #[test]
    fn cross_pipeline_betti_on_s2() {
        let b = builtin("S2").unwrap();
        for (n, h, s) in cross_pipeline_betti(&b.pd, &b.sullivan, 8).unwrap() {
            assert_eq!(h, s, "pipelines disagree at degree {n}");
            assert_eq!(h, 1, "dim H^{n}(LS²) should be 1");
        }
    }
}
