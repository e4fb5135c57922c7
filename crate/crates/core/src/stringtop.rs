//! The loop product, BV operator and bracket on the shifted dual of
//! Hochschild homology, with the duality transport onto Hochschild
//! cohomology as the cross-check.
//!
//! The chain model of loop composition is
//!
//! ```text
//! Φ(a₀⊗[a₁|…|a_k]) = Σ_{i=0}^k Σ ± (a₀′⊗[a₁|…|a_i]) ⊗ (a₀″⊗[a_{i+1}|…|a_k])
//! ```
//!
//! where `μ_A(a₀) = Σ a₀′⊗a₀″` and the sign is the Koszul cost
//! `(−1)^{|a₀″|·(|sa₁|+…+|sa_i|)}` of moving `a₀″` past the first `i`
//! letters.  Φ has degree `m` and commutes with the differentials in the
//! graded sense.
//!
//! The loop algebra lives on `ℍ_p := (H^{p+m})^∨`; the product is the linear
//! dual of the homology-level Φ, read off through per-degree coordinate
//! functionals (a chain projection homotopic to the identity, so Künneth
//! coordinates can be taken leg by leg) and twisted by `(−1)^{m·a}` on the
//! left leg's chain degree — the sign that makes the table unital.  `Δ` is
//! the plain dual of the rotation operator, and the bracket is the BV
//! deviation `{x,y} = (−1)^{|x|}(Δ(x•y) − Δx•y − (−1)^{|x|} x•Δy)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::cdga::{DiagonalMap, PdModel};
use crate::exactlin::{int, Homology, Scalar, SparseMatrix, SparseVec};
use crate::hochschild::{
    boundary_terms, chain_word_basis, connes_terms, filtration_level, CochainComplex,
    HochschildComplex, Word,
};
use crate::{Error, Result};

/// Φ applied to one word, as a sparse combination of word pairs.
pub fn loop_coproduct_terms(
    pd: &PdModel,
    mu: &DiagonalMap,
    w: &Word,
) -> Vec<(Scalar, Word, Word)> {
    let alg = pd.algebra();
    let mut out = Vec::new();
    let mut susp_prefix = 0i64;
    for i in 0..=w.letters.len() {
        for (c, left_head, right_head) in mu.of_basis(w.head) {
            let mut coeff = c.clone();
            if (alg.degree(*right_head) * susp_prefix) % 2 != 0 {
                coeff = -coeff;
            }
            out.push((
                coeff,
                Word::new(*left_head, w.letters[..i].to_vec()),
                Word::new(*right_head, w.letters[i..].to_vec()),
            ));
        }
        if i < w.letters.len() {
            susp_prefix += alg.degree(w.letters[i]) - 1;
        }
    }
    out
}

/// Exact chain-map and filtration checks for Φ on every basis word of degree
/// ≤ `n_max`, by pure formula application.  Returns the first failure with a
/// witness word.
pub fn verify_phi(pd: &PdModel, n_max: i64) -> std::result::Result<(), String> {
    let alg = pd.algebra();
    let mu = pd.diagonal_map().map_err(|e| e.to_string())?;
    let m = pd.dimension;
    let basis = chain_word_basis(alg, n_max);
    for level in basis.values() {
        for w in level {
            let p = filtration_level(w);
            let phi_w = loop_coproduct_terms(pd, &mu, w);
            for (_, u, v) in &phi_w {
                if filtration_level(u) + filtration_level(v) != p {
                    return Err(format!(
                        "Φ does not respect the word-length splitting at {}",
                        w.label(alg)
                    ));
                }
            }
            // D∘Φ − (−1)^m Φ∘∂ = 0 with D(u⊗v) = ∂u⊗v + (−1)^{|u|} u⊗∂v
            let mut acc: HashMap<(Word, Word), Scalar> = HashMap::new();
            let mut add = |u: Word, v: Word, c: Scalar| {
                if !c.is_zero() {
                    let e = acc.entry((u, v)).or_insert_with(|| int(0));
                    *e += c;
                }
            };
            for (c, u, v) in &phi_w {
                for (cu, du) in boundary_terms(alg, u) {
                    add(du, v.clone(), c * &cu);
                }
                let sign = if u.degree(alg) % 2 != 0 { -1 } else { 1 };
                for (cv, dv) in boundary_terms(alg, v) {
                    add(u.clone(), dv, c * &cv * int(sign));
                }
            }
            let rhs_sign = if m % 2 != 0 { 1 } else { -1 };
            for (c, dw) in boundary_terms(alg, w) {
                for (c2, u, v) in loop_coproduct_terms(pd, &mu, &dw) {
                    add(u, v, &c * &c2 * int(rhs_sign));
                }
            }
            if acc.values().any(|c| !c.is_zero()) {
                return Err(format!("Φ is not a chain map at {}", w.label(alg)));
            }
        }
    }
    Ok(())
}

/// Homology-level multiplication table, BV operator and bracket on
/// `ℍ_p = (H^{p+m})^∨` for `−m ≤ p ≤ n_max − m`.
#[derive(Debug)]
pub struct LoopAlgebra {
    pub m: i64,
    pub n_max: i64,
    hochschild: HochschildComplex,
    homology: BTreeMap<i64, Homology>,
    /// `product[(p,q)][i][j]` = coordinates of `h_{p,i} • h_{q,j}` in ℍ_{p+q}.
    product: HashMap<(i64, i64), ProductTable>,
    /// `delta[p][i]` = coordinates of `Δ h_{p,i}` in ℍ_{p+1}.
    delta: BTreeMap<i64, Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
}

/// `table[i][j]` = coordinates of the product of the i-th and j-th basis
/// classes in the target degree's basis.
type ProductTable = Vec<Vec<Vec<Scalar>>>;

/// Element of `ℍ_p` in the stored dual basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LoopClass {
    pub p: i64,
    pub coords: Vec<Scalar>,
}

impl LoopClass {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Builds the loop algebra of a validated Poincaré duality model.
pub fn loop_algebra(pd: &PdModel, n_max: i64) -> Result<LoopAlgebra> {
    let m = pd.dimension;
    if n_max < m {
        return Err(Error::InvalidModel(format!(
            "truncation {n_max} is too small to contain the unit (need at least m = {m})"
        )));
    }
    let report = pd.validate();
    if !report.is_clean() {
        return Err(Error::InvalidModel(format!(
            "model fails validation: {}",
            report.violations[0]
        )));
    }
    let alg = Arc::new(pd.algebra().clone());
    let hochschild = HochschildComplex::build(alg, n_max)?;
    let mu = pd.diagonal_map()?;

    let mut homology = BTreeMap::new();
    for n in 0..=n_max {
        homology.insert(n, hochschild.complex().homology(n)?);
    }

    // Φ at homology level, read through the coordinate functionals leg by leg
    let mut product: HashMap<(i64, i64), ProductTable> = HashMap::new();
    for n in 0..=n_max {
        let h_n = &homology[&n];
        for (c_idx, rep) in h_n.reps.iter().enumerate() {
            // Φ(z_c) grouped by the bidegree (a, b) of the legs
            let mut by_bidegree: HashMap<(i64, i64), Vec<(Scalar, usize, usize)>> = HashMap::new();
            for (w_idx, w_coeff) in rep {
                let w = &hochschild.words(n)[*w_idx];
                for (c, u, v) in loop_coproduct_terms(pd, &mu, w) {
                    let a = u.degree(pd.algebra());
                    let b = n + m - a;
                    if a > n_max || b > n_max {
                        continue;
                    }
                    let (ad, ui) = hochschild.index_of(&u).expect("left leg in basis");
                    let (bd, vi) = hochschild.index_of(&v).expect("right leg in basis");
                    debug_assert_eq!((ad, bd), (a, b));
                    by_bidegree
                        .entry((a, b))
                        .or_default()
                        .push((c * w_coeff, ui, vi));
                }
            }
            for ((a, b), terms) in by_bidegree {
                let (ha, hb) = (&homology[&a], &homology[&b]);
                if ha.dim == 0 || hb.dim == 0 {
                    continue;
                }
                let (p, q) = (a - m, b - m);
                // dualization sign (−1)^{m·a}: the left leg carries the
                // degree-m dual twist; pinned by the unit axiom and the
                // cup-product transport (invisible for even m)
                let sign = if (m * a) % 2 != 0 { int(-1) } else { int(1) };
                let table = product.entry((p, q)).or_insert_with(|| {
                    vec![vec![vec![int(0); h_dim(&homology, n)]; hb.dim]; ha.dim]
                });
                for (coeff, ui, vi) in terms {
                    for i in 0..ha.dim {
                        let ca = ha.coord_of_basis(i, ui);
                        if ca.is_zero() {
                            continue;
                        }
                        for j in 0..hb.dim {
                            let cb = hb.coord_of_basis(j, vi);
                            if cb.is_zero() {
                                continue;
                            }
                            table[i][j][c_idx] += &coeff * ca * cb * &sign;
                        }
                    }
                }
            }
        }
    }

    // Δ = plain dual of the rotation operator; any degreewise sign here
    // breaks the Jacobi identity against the product convention above
    let mut delta: BTreeMap<i64, Vec<Vec<Scalar>>> = BTreeMap::new();
    for p in -m..=(n_max - m - 1) {
        let n = p + m;
        let dim_p = h_dim(&homology, n);
        let dim_p1 = h_dim(&homology, n + 1);
        let mut table = vec![vec![int(0); dim_p1]; dim_p];
        if dim_p > 0 && dim_p1 > 0 {
            let h_n = &homology[&n];
            let h_n1 = &homology[&(n + 1)];
            for (c_idx, rep) in h_n1.reps.iter().enumerate() {
                let mut image: SparseVec = Vec::new();
                for (w_idx, w_coeff) in rep {
                    let w = hochschild.words(n + 1)[*w_idx].clone();
                    for (c, u) in connes_terms(pd.algebra(), &w) {
                        let (_, ui) = hochschild.index_of(&u).expect("rotation stays in basis");
                        image = crate::exactlin::sv_add_scaled(
                            &image,
                            &[(ui, c)],
                            w_coeff,
                        );
                    }
                }
                let coords = h_n.project(&image);
                for (i, v) in coords.into_iter().enumerate() {
                    table[i][c_idx] = v;
                }
            }
        }
        delta.insert(p, table);
    }

    let mut la = LoopAlgebra {
        m,
        n_max,
        hochschild,
        homology,
        product,
        delta,
        unit: Vec::new(),
    };
    la.unit = la.solve_unit()?;
    Ok(la)
}

fn h_dim(homology: &BTreeMap<i64, Homology>, n: i64) -> usize {
    homology.get(&n).map_or(0, |h| h.dim)
}

impl LoopAlgebra {
    pub fn degree_range(&self) -> std::ops::RangeInclusive<i64> {
        -self.m..=(self.n_max - self.m)
    }

    pub fn dim(&self, p: i64) -> usize {
        if self.degree_range().contains(&p) {
            h_dim(&self.homology, p + self.m)
        } else {
            0
        }
    }

    pub fn hochschild(&self) -> &HochschildComplex {
        &self.hochschild
    }

    pub fn homology_at(&self, n: i64) -> Option<&Homology> {
        self.homology.get(&n)
    }

    pub fn basis_label(&self, p: i64, i: usize) -> String {
        format!("h{p}.{i}")
    }

    pub fn zero(&self, p: i64) -> LoopClass {
        LoopClass {
            p,
            coords: vec![int(0); self.dim(p)],
        }
    }

    pub fn basis_class(&self, p: i64, i: usize) -> LoopClass {
        let mut z = self.zero(p);
        z.coords[i] = int(1);
        z
    }

    pub fn unit(&self) -> LoopClass {
        LoopClass {
            p: 0,
            coords: self.unit.clone(),
        }
    }

    /// The loop product, `None` when the degrees leave the stored range.
    pub fn mul(&self, x: &LoopClass, y: &LoopClass) -> Option<LoopClass> {
        let (p, q) = (x.p, y.p);
        if !self.degree_range().contains(&p) || !self.degree_range().contains(&q) {
            return None;
        }
        if p + q + self.m > self.n_max {
            return None;
        }
        let mut out = self.zero(p + q);
        if let Some(table) = self.product.get(&(p, q)) {
            for (i, ci) in x.coords.iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                for (j, cj) in y.coords.iter().enumerate() {
                    if cj.is_zero() {
                        continue;
                    }
                    for (k, v) in table[i][j].iter().enumerate() {
                        out.coords[k] += v * ci * cj;
                    }
                }
            }
        }
        Some(out)
    }

    /// The BV operator, `None` outside the stored range.
    pub fn delta(&self, x: &LoopClass) -> Option<LoopClass> {
        let table = self.delta.get(&x.p)?;
        let mut out = self.zero(x.p + 1);
        for (i, ci) in x.coords.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (k, v) in table[i].iter().enumerate() {
                out.coords[k] += v * ci;
            }
        }
        Some(out)
    }

    /// `{x,y} = (−1)^{|x|} (Δ(x•y) − Δ(x)•y − (−1)^{|x|} x•Δ(y))`.
    pub fn bv_bracket(&self, x: &LoopClass, y: &LoopClass) -> Option<LoopClass> {
        let xy = self.mul(x, y)?;
        let d_xy = self.delta(&xy)?;
        let dx_y = self.mul(&self.delta(x)?, y)?;
        let x_dy = self.mul(x, &self.delta(y)?)?;
        let sx = if x.p % 2 != 0 { int(-1) } else { int(1) };
        let mut coords = d_xy.coords;
        for (k, v) in dx_y.coords.iter().enumerate() {
            coords[k] -= v;
        }
        for (k, v) in x_dy.coords.iter().enumerate() {
            coords[k] -= v * &sx;
        }
        for v in coords.iter_mut() {
            *v *= &sx;
        }
        Some(LoopClass {
            p: x.p + 1 + y.p,
            coords,
        })
    }

    /// Finds the two-sided unit of the product table in ℍ_0 by an exact
    /// linear solve; its existence pins the dualization convention.
    fn solve_unit(&self) -> Result<Vec<Scalar>> {
        let dim0 = self.dim(0);
        if dim0 == 0 {
            return Err(Error::Inconsistent("ℍ_0 is empty".into()));
        }
        let mut rows: Vec<SparseVec> = Vec::new();
        let mut rhs: Vec<Scalar> = Vec::new();
        for q in self.degree_range() {
            for j in 0..self.dim(q) {
                if self.mul(&self.zero(0), &self.zero(q)).is_none() {
                    continue;
                }
                for c in 0..self.dim(q) {
                    // Σ_i u_i (h_{0,i} • h_{q,j})_c = δ_{jc} and symmetrically
                    let mut left_row: SparseVec = Vec::new();
                    let mut right_row: SparseVec = Vec::new();
                    for i in 0..dim0 {
                        let li = self
                            .product
                            .get(&(0, q))
                            .map_or_else(|| int(0), |t| t[i][j][c].clone());
                        if !li.is_zero() {
                            left_row.push((i, li));
                        }
                        let ri = self
                            .product
                            .get(&(q, 0))
                            .map_or_else(|| int(0), |t| t[j][i][c].clone());
                        if !ri.is_zero() {
                            right_row.push((i, ri));
                        }
                    }
                    let want = if j == c { int(1) } else { int(0) };
                    rows.push(left_row);
                    rhs.push(want.clone());
                    rows.push(right_row);
                    rhs.push(want);
                }
            }
        }
        // assemble (rows × dim0) system
        let mut triplets = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            for (i, v) in row {
                triplets.push((r, *i, v.clone()));
            }
        }
        let mat = SparseMatrix::from_triplets(rows.len(), dim0, triplets);
        let b: SparseVec = rhs
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        let sol = crate::exactlin::solve(&mat, &b).ok_or_else(|| {
            Error::Inconsistent("no unit for the loop product table".into())
        })?;
        let mut unit = vec![int(0); dim0];
        for (i, v) in sol {
            unit[i] = v;
        }
        Ok(unit)
    }

    /// Exhaustive BV-axiom verification over all in-range basis tuples.
    pub fn verify(&self) -> BvReport {
        self.verify_sampled(usize::MAX, 0)
    }

    /// Like [`LoopAlgebra::verify`], but deterministically subsamples triple
    /// checks beyond `cap` using `seed`.
    pub fn verify_sampled(&self, cap: usize, seed: u64) -> BvReport {
        let mut report = BvReport::default();
        let range: Vec<i64> = self.degree_range().collect();

        // unit on every basis class
        let u = self.unit();
        for &p in &range {
            for i in 0..self.dim(p) {
                let z = self.basis_class(p, i);
                if let Some(uz) = self.mul(&u, &z) {
                    report.check(uz == z, || {
                        format!("unit law fails at u • {}", self.basis_label(p, i))
                    });
                }
                if let Some(zu) = self.mul(&z, &u) {
                    report.check(zu == z, || {
                        format!("unit law fails at {} • u", self.basis_label(p, i))
                    });
                }
            }
        }

        // graded commutativity
        for &p in &range {
            for &q in &range {
                for i in 0..self.dim(p) {
                    for j in 0..self.dim(q) {
                        let x = self.basis_class(p, i);
                        let y = self.basis_class(q, j);
                        let (Some(xy), Some(yx)) = (self.mul(&x, &y), self.mul(&y, &x)) else {
                            continue;
                        };
                        let mut flipped = yx;
                        if (p * q) % 2 != 0 {
                            for v in flipped.coords.iter_mut() {
                                *v = -v.clone();
                            }
                        }
                        report.check(xy == flipped, || {
                            format!(
                                "commutativity fails at ({}, {})",
                                self.basis_label(p, i),
                                self.basis_label(q, j)
                            )
                        });
                    }
                }
            }
        }

        // Δ² = 0
        for &p in &range {
            for i in 0..self.dim(p) {
                let x = self.basis_class(p, i);
                if let Some(dx) = self.delta(&x) {
                    if let Some(ddx) = self.delta(&dx) {
                        report.check(ddx.is_zero(), || {
                            format!("Δ² ≠ 0 at {}", self.basis_label(p, i))
                        });
                    }
                }
            }
        }

        // bracket antisymmetry: {x,y} = −(−1)^{(|x|−1)(|y|−1)} {y,x}.
        // The leading minus is forced by the BV formula together with graded
        // commutativity; the suspended form of the statement drops it.
        for &p in &range {
            for &q in &range {
                for i in 0..self.dim(p) {
                    for j in 0..self.dim(q) {
                        let x = self.basis_class(p, i);
                        let y = self.basis_class(q, j);
                        let (Some(xy), Some(yx)) =
                            (self.bv_bracket(&x, &y), self.bv_bracket(&y, &x))
                        else {
                            continue;
                        };
                        let mut expect = yx;
                        if ((p - 1) * (q - 1)) % 2 == 0 {
                            for v in expect.coords.iter_mut() {
                                *v = -v.clone();
                            }
                        }
                        report.check(xy == expect, || {
                            format!(
                                "bracket antisymmetry fails at ({}, {})",
                                self.basis_label(p, i),
                                self.basis_label(q, j)
                            )
                        });
                    }
                }
            }
        }

        // associativity, Jacobi, Leibniz over triples
        let mut triples = Vec::new();
        for &p in &range {
            for &q in &range {
                for &r in &range {
                    for i in 0..self.dim(p) {
                        for j in 0..self.dim(q) {
                            for k in 0..self.dim(r) {
                                triples.push(((p, i), (q, j), (r, k)));
                            }
                        }
                    }
                }
            }
        }
        let selected = sample_indices(triples.len(), cap, seed);
        for idx in selected {
            let ((p, i), (q, j), (r, k)) = triples[idx];
            let x = self.basis_class(p, i);
            let y = self.basis_class(q, j);
            let z = self.basis_class(r, k);

            if let (Some(xy), Some(yz)) = (self.mul(&x, &y), self.mul(&y, &z)) {
                if let (Some(xy_z), Some(x_yz)) = (self.mul(&xy, &z), self.mul(&x, &yz)) {
                    report.check(xy_z == x_yz, || {
                        format!(
                            "associativity fails at ({}, {}, {})",
                            self.basis_label(p, i),
                            self.basis_label(q, j),
                            self.basis_label(r, k)
                        )
                    });
                }
            }

            // Jacobi: {x,{y,z}} = {{x,y},z} + (−1)^{(p−1)(q−1)} {y,{x,z}}
            if let (Some(yz), Some(xy), Some(xz)) = (
                self.bv_bracket(&y, &z),
                self.bv_bracket(&x, &y),
                self.bv_bracket(&x, &z),
            ) {
                if let (Some(lhs), Some(t1), Some(t2)) = (
                    self.bv_bracket(&x, &yz),
                    self.bv_bracket(&xy, &z),
                    self.bv_bracket(&y, &xz),
                ) {
                    let mut rhs = t1;
                    let sign = if ((p - 1) * (q - 1)) % 2 != 0 {
                        int(-1)
                    } else {
                        int(1)
                    };
                    for (c, v) in rhs.coords.iter_mut().zip(&t2.coords) {
                        *c += v * &sign;
                    }
                    report.check(lhs == rhs, || {
                        format!(
                            "Jacobi fails at ({}, {}, {})",
                            self.basis_label(p, i),
                            self.basis_label(q, j),
                            self.basis_label(r, k)
                        )
                    });
                }
            }

            // Leibniz: {x, y•z} = {x,y}•z + (−1)^{(p−1)q} y•{x,z}
            if let (Some(yz), Some(xy), Some(xz)) = (
                self.mul(&y, &z),
                self.bv_bracket(&x, &y),
                self.bv_bracket(&x, &z),
            ) {
                if let (Some(lhs), Some(t1), Some(t2)) = (
                    self.bv_bracket(&x, &yz),
                    self.mul(&xy, &z),
                    self.mul(&y, &xz),
                ) {
                    let mut rhs = t1;
                    let sign = if (((p - 1) * q) % 2) != 0 {
                        int(-1)
                    } else {
                        int(1)
                    };
                    for (c, v) in rhs.coords.iter_mut().zip(&t2.coords) {
                        *c += v * &sign;
                    }
                    report.check(lhs == rhs, || {
                        format!(
                            "Poisson rule fails at ({}, {}, {})",
                            self.basis_label(p, i),
                            self.basis_label(q, j),
                            self.basis_label(r, k)
                        )
                    });
                }
            }
        }

        report
    }
}

/// Outcome of a verification suite: number of identities checked and the
/// failures, each with a witness.
#[derive(Clone, Debug, Default)]
pub struct BvReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl BvReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(msg());
        }
    }
}

fn sample_indices(total: usize, cap: usize, seed: u64) -> Vec<usize> {
    if total <= cap {
        return (0..total).collect();
    }
    // splitmix64 stream, deterministic in the seed
    let mut state = seed.wrapping_add(0x9e3779b97f4a7c15);
    let mut next = || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    let mut out: Vec<usize> = (0..cap).map(|_| (next() as usize) % total).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Entry-by-entry comparison of the loop product table with the cup product
/// on Hochschild cohomology, through the duality transport.
#[derive(Clone, Debug, Default)]
pub struct TransportReport {
    pub entries_checked: usize,
    pub failures: Vec<String>,
}

impl TransportReport {
    pub fn is_clean(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Computes (i) the loop product via the dual of Φ, (ii) the cup product on
/// Hochschild cohomology, and (iii) the duality isomorphism between the two,
/// then asserts the isomorphism carries table (i) to table (ii).
pub fn transport_to_hh(pd: &PdModel, n_max: i64) -> Result<TransportReport> {
    let la = loop_algebra(pd, n_max)?;
    transport_report(pd, &la)
}

/// Same as [`transport_to_hh`] for an already-built loop algebra.
pub fn transport_report(pd: &PdModel, la: &LoopAlgebra) -> Result<TransportReport> {
    let m = pd.dimension;
    let n_max = la.n_max;
    let alg = Arc::new(pd.algebra().clone());
    let theta = pd.duality_map()?;
    let cc = CochainComplex::build(alg, m - n_max - 1, m)?;

    let mut report = TransportReport::default();

    // cochain cohomology at degree −p for every stored p
    let mut cohomology: BTreeMap<i64, Homology> = BTreeMap::new();
    for p in la.degree_range() {
        cohomology.insert(-p, cc.complex().homology(-p)?);
    }

    // duality bookkeeping: dim ℍ_p = dim H^{−p}(cochains)
    for p in la.degree_range() {
        let want = la.dim(p);
        let got = cohomology[&-p].dim;
        if want != got {
            report.failures.push(format!(
                "dim ℍ_{p} = {want} but dim of cohomology at {} is {got}",
                -p
            ));
        }
    }
    if !report.is_clean() {
        return Ok(report);
    }

    // the transport matrix per degree: dual class i at chain degree n = p+m
    // becomes the cochain  g(w) = θ^{−1}(a ↦ (−1)^{|a|·|sw|} y_i(a⊗w))
    let mut transport: BTreeMap<i64, Vec<Vec<Scalar>>> = BTreeMap::new();
    for p in la.degree_range() {
        let n = p + m;
        let h = la.homology_at(n).expect("homology stored");
        let mut columns = Vec::new();
        for i in 0..h.dim {
            let mut g: SparseVec = Vec::new();
            // coefficient of basis cochain (w, b) in g is the b-coordinate of
            // ξ_w with ∫(ξ_w·c) = φ_w(c), φ_w(a) = (−1)^{|a||sw|} y_i(a⊗w);
            // solve once per word, then distribute over targets
            let susp = |word: &[usize]| -> i64 {
                word.iter()
                    .map(|l| pd.algebra().degree(*l) - 1)
                    .sum::<i64>()
            };
            let mut seen_words: Vec<(Vec<usize>, Vec<Scalar>)> = Vec::new();
            for f in cc.basis(-p) {
                if seen_words.iter().any(|(w, _)| *w == f.word) {
                    continue;
                }
                let d = susp(&f.word);
                let deg_a = n - d;
                let heads = pd.algebra().basis_of_degree(deg_a);
                let mut phi_coords: Vec<Scalar> = Vec::new();
                for &a in heads {
                    let word = Word::new(a, f.word.clone());
                    let value = match la.hochschild().index_of(&word) {
                        Some((wn, wi)) => {
                            debug_assert_eq!(wn, n);
                            let mut v = h.coord_of_basis(i, wi).clone();
                            if (pd.algebra().degree(a) * d) % 2 != 0 {
                                v = -v;
                            }
                            v
                        }
                        None => int(0),
                    };
                    phi_coords.push(value);
                }
                // solve θ(ξ) = φ in degree m − deg_a
                let k = m - deg_a;
                let block = theta.block(k).expect("θ block");
                let rhs: SparseVec = phi_coords
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(r, v)| (r, v.clone()))
                    .collect();
                let xi = crate::exactlin::solve(block, &rhs)
                    .ok_or_else(|| Error::Inconsistent("θ solve failed".into()))?;
                let mut dense = vec![int(0); pd.algebra().basis_of_degree(k).len()];
                for (r, v) in xi {
                    dense[r] = v;
                }
                seen_words.push((f.word.clone(), dense));
            }
            for (f_idx, f) in cc.basis(-p).iter().enumerate() {
                let (_, dense) = seen_words
                    .iter()
                    .find(|(w, _)| *w == f.word)
                    .expect("word solved");
                let pos = pd.algebra().position_in_degree(f.target);
                let v = dense[pos].clone();
                if !v.is_zero() {
                    g.push((f_idx, v));
                }
            }
            g.sort_by_key(|(i, _)| *i);
            // the transported functional must be a cocycle
            if !cc.complex().differential().apply(-p, &g).is_empty() {
                report
                    .failures
                    .push(format!("transport of h{p}.{i} is not a cocycle"));
                continue;
            }
            // twist (−1)^{p(p−1)/2} of the degree reversal p ↦ −p in the
            // dualization; its multiplicativity defect (−1)^{pq} is exactly
            // how the dual of Φ differs from the cup product on odd×odd
            // pairs (invisible on models whose odd×odd products vanish)
            let mut coords = cohomology[&-p].project(&g);
            if (p * (p - 1) / 2) % 2 != 0 {
                for v in coords.iter_mut() {
                    *v = -v.clone();
                }
            }
            columns.push(coords);
        }
        transport.insert(p, columns);
    }
    if !report.is_clean() {
        return Ok(report);
    }

    // the transport must be bijective degreewise
    for p in la.degree_range() {
        let cols = &transport[&p];
        let dim = la.dim(p);
        let mat = SparseMatrix::from_triplets(
            dim,
            dim,
            cols.iter().enumerate().flat_map(|(j, col)| {
                col.iter()
                    .enumerate()
                    .map(move |(r, v)| (r, j, v.clone()))
                    .collect::<Vec<_>>()
            }),
        );
        if crate::exactlin::rank(&mat) != dim {
            report
                .failures
                .push(format!("transport is singular at ℍ_{p}"));
        }
    }
    if !report.is_clean() {
        return Ok(report);
    }

    // unit goes to the class of the unit cochain
    {
        let u = la.unit();
        let mut t_u = vec![int(0); la.dim(0)];
        for (i, c) in u.coords.iter().enumerate() {
            for (k, v) in transport[&0][i].iter().enumerate() {
                t_u[k] += v * c;
            }
        }
        let unit_class = cohomology[&0].project(&cc.unit_cochain());
        if t_u != unit_class {
            report
                .failures
                .push("transport does not send the unit to the unit".into());
        }
        report.entries_checked += 1;
    }

    // cup table on cohomology classes, then entrywise comparison
    for p in la.degree_range() {
        for q in la.degree_range() {
            if la.mul(&la.zero(p), &la.zero(q)).is_none() {
                continue;
            }
            let r = p + q;
            if !la.degree_range().contains(&r) {
                continue;
            }
            let (hp, hq, hr) = (&cohomology[&-p], &cohomology[&-q], &cohomology[&-r]);
            for i in 0..la.dim(p) {
                for j in 0..la.dim(q) {
                    let x = la.basis_class(p, i);
                    let y = la.basis_class(q, j);
                    let xy = la.mul(&x, &y).expect("in range");
                    // transport of the product
                    let mut lhs = vec![int(0); hr.dim];
                    for (c_idx, c) in xy.coords.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        for (k, v) in transport[&r][c_idx].iter().enumerate() {
                            lhs[k] += v * c;
                        }
                    }
                    // cup of the transports, via representatives
                    let mut rhs = vec![int(0); hr.dim];
                    for (alpha, ca) in transport[&p][i].iter().enumerate() {
                        if ca.is_zero() {
                            continue;
                        }
                        for (beta, cb) in transport[&q][j].iter().enumerate() {
                            if cb.is_zero() {
                                continue;
                            }
                            let cup = cc.cup(-p, &hp.reps[alpha], -q, &hq.reps[beta]);
                            let coords = hr.project(&cup);
                            for (k, v) in coords.into_iter().enumerate() {
                                rhs[k] += v * ca * cb;
                            }
                        }
                    }
                    report.entries_checked += 1;
                    if lhs != rhs {
                        report.failures.push(format!(
                            "transport mismatch at {} • {}",
                            la.basis_label(p, i),
                            la.basis_label(q, j)
                        ));
                    }
                }
            }
        }
    }

    Ok(report)
}
