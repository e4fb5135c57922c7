use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::cdga::{Cdga, ElemId};
use crate::exactlin::{int, Complex, DegreeMap, GradedSpace, Scalar, SparseMatrix, SparseVec};
use crate::{Error, Result};

use super::chain::suspension;

/// Basis cochain: the map sending one letter word to one basis element of `A`
/// and every other word to zero.  Its degree is `|target| − Σ|s·letters|`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CochainElt {
    pub word: Vec<ElemId>,
    pub target: ElemId,
}

impl CochainElt {
    pub fn degree(&self, alg: &Cdga) -> i64 {
        alg.degree(self.target) - suspension(alg, &self.word)
    }

    pub fn arity(&self) -> usize {
        self.word.len()
    }

    pub fn label(&self, alg: &Cdga) -> String {
        let letters: Vec<&str> = self.word.iter().map(|l| alg.label(*l)).collect();
        format!("[{}]↦{}", letters.join("|"), alg.label(self.target))
    }
}

/// Hochschild cochain complex `Hom(T(sĀ), A)` over a stored degree window.
///
/// Per degree the basis is finite: a degree-`n` cochain has letter suspension
/// degree `|target| − n`, which is bounded by `m − n`.  The window must be
/// wide enough for the homology degrees of interest (one degree of slack on
/// each side).
#[derive(Clone, Debug)]
pub struct CochainComplex {
    alg: Arc<Cdga>,
    lo: i64,
    hi: i64,
    basis: BTreeMap<i64, Vec<CochainElt>>,
    index: HashMap<CochainElt, (i64, usize)>,
    complex: Complex,
}

impl CochainComplex {
    /// Builds the complex for cochain degrees `lo..=hi`.
    pub fn build(alg: Arc<Cdga>, lo: i64, hi: i64) -> Result<CochainComplex> {
        let report = alg.validate();
        if !report.is_clean() {
            return Err(Error::InvalidModel(format!(
                "algebra fails validation: {}",
                report.violations[0]
            )));
        }
        let hi = hi.min(alg.top_degree());
        let max_susp = alg.top_degree() - lo;
        let words = super::chain::letter_words(&alg, max_susp);

        let mut basis: BTreeMap<i64, Vec<CochainElt>> = BTreeMap::new();
        for n in lo..=hi {
            let mut level = Vec::new();
            for target in 0..alg.dim() {
                let d = alg.degree(target) - n;
                if !(0..=max_susp).contains(&d) {
                    continue;
                }
                for w in &words[d as usize] {
                    level.push(CochainElt {
                        word: w.clone(),
                        target,
                    });
                }
            }
            level.sort_by_key(|f| (f.word.len(), f.word.clone(), f.target));
            basis.insert(n, level);
        }

        let mut index = HashMap::new();
        let mut degrees = BTreeMap::new();
        for (n, level) in &basis {
            for (i, f) in level.iter().enumerate() {
                index.insert(f.clone(), (*n, i));
            }
            degrees.insert(*n, level.iter().map(|f| f.label(&alg)).collect());
        }
        let space = Arc::new(GradedSpace::new(degrees));

        // preimage tables for the dual-shaped differential
        let mut d_preimage: HashMap<ElemId, Vec<(ElemId, Scalar)>> = HashMap::new();
        for g in 0..alg.dim() {
            for (e, c) in alg.d_basis(g) {
                d_preimage.entry(*e).or_default().push((g, c.clone()));
            }
        }
        let mut mul_preimage: HashMap<ElemId, Vec<(ElemId, ElemId, Scalar)>> = HashMap::new();
        for g in alg.augmentation_ideal().collect::<Vec<_>>() {
            for h in alg.augmentation_ideal().collect::<Vec<_>>() {
                for (e, c) in alg.mul_basis(g, h) {
                    mul_preimage.entry(*e).or_default().push((g, h, c.clone()));
                }
            }
        }

        let mut delta = DegreeMap::zero(space.clone(), space.clone(), 1);
        for n in lo..=hi {
            let level = &basis[&n];
            let rows = space.dim(n + 1);
            let mut block = SparseMatrix::zero(rows, level.len());
            for (j, f) in level.iter().enumerate() {
                let terms = delta_terms(&alg, f, &d_preimage, &mul_preimage);
                let mut col: SparseVec = Vec::new();
                for (c, g) in terms {
                    // outputs above the window top are genuinely absent only
                    // when the window is too small; the top of the algebra
                    // bounds cochain degrees, so inside [lo, hi] this resolves
                    if let Some((d, i)) = index.get(&g) {
                        debug_assert_eq!(*d, n + 1);
                        col.push((*i, c));
                    } else {
                        debug_assert!(g.degree(&alg) > hi);
                    }
                }
                col.sort_by_key(|(i, _)| *i);
                let merged = crate::exactlin::sv_add_scaled(&col, &[], &int(1));
                block.set_column(j, merged);
            }
            delta.insert_block(n, block);
        }

        let complex = Complex::new(space, delta);
        Ok(CochainComplex {
            alg,
            lo,
            hi,
            basis,
            index,
            complex,
        })
    }

    pub fn algebra(&self) -> &Arc<Cdga> {
        &self.alg
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn basis(&self, n: i64) -> &[CochainElt] {
        self.basis.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, f: &CochainElt) -> Option<(i64, usize)> {
        self.index.get(f).copied()
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    /// Expands a sparse combination of basis cochains of degree `n`.
    /// Terms outside the stored window are dropped; inside the window the
    /// basis is complete, so a missing entry is a bug.
    pub fn to_vec(&self, n: i64, terms: Vec<(Scalar, CochainElt)>) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, f) in terms {
            match self.index.get(&f) {
                Some((d, i)) => {
                    debug_assert_eq!(*d, n);
                    let e = acc.entry(*i).or_insert_with(|| int(0));
                    *e += c;
                }
                None => {
                    debug_assert!(
                        !(self.lo..=self.hi).contains(&n),
                        "cochain missing from a complete window"
                    );
                }
            }
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    /// Cup product of cochain vectors of degrees `n1`, `n2`:
    /// `(f∪g)(w) = (−1)^{|g|·|s(first)|} f(first)·g(rest)` on split words.
    /// Associative and unital at chain level; commutative only in homology.
    pub fn cup(&self, n1: i64, f: &SparseVec, n2: i64, g: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, ci) in f {
            let fi = &self.basis[&n1][*i];
            for (j, cj) in g {
                let gj = &self.basis[&n2][*j];
                for (c, elt) in cup_basis(&self.alg, fi, n2, gj) {
                    terms.push((c * ci * cj, elt));
                }
            }
        }
        self.to_vec(n1 + n2, terms)
    }

    /// Gerstenhaber bracket `[f,g] = f∘̄g − (−1)^{(|f|−1)(|g|−1)} g∘̄f` of
    /// cochain vectors, via the pre-Lie insertion composition.
    pub fn bracket(&self, n1: i64, f: &SparseVec, n2: i64, g: &SparseVec) -> SparseVec {
        let mut terms = Vec::new();
        for (i, ci) in f {
            let fi = &self.basis[&n1][*i];
            for (j, cj) in g {
                let gj = &self.basis[&n2][*j];
                for (c, elt) in circle_basis(&self.alg, fi, n2, gj) {
                    terms.push((c * ci * cj, elt));
                }
                let sign = if ((n1 - 1) * (n2 - 1)) % 2 != 0 {
                    int(1)
                } else {
                    int(-1)
                };
                for (c, elt) in circle_basis(&self.alg, gj, n1, fi) {
                    terms.push((c * ci * cj * &sign, elt));
                }
            }
        }
        self.to_vec(n1 + n2 - 1, terms)
    }

    /// The arity-0 unit cochain `[] ↦ 1` as a vector in degree 0.
    pub fn unit_cochain(&self) -> SparseVec {
        let f = CochainElt {
            word: Vec::new(),
            target: self.alg.unit(),
        };
        let (_, i) = self.index_of(&f).expect("unit cochain inside window");
        vec![(i, int(1))]
    }
}

/// `δf` of a basis cochain by the dual-shaped formula, with
/// `ε_i = Σ_{j<i}|sa_j|` over the input word:
///
/// ```text
/// δf(w) = d(f(w)) + (−1)^{|f|} Σ_i (−1)^{ε_i} f(w: a_i → da_i)
///         − (−1)^{|f|} [ (−1)^{|f||a₁|} a₁·f(a₂,…)
///                        + Σ_{i≥2} (−1)^{ε_i} f(…, a_{i−1}a_i, …)
///                        − (−1)^{ε_k} f(a₁,…,a_{k−1})·a_k ]
/// ```
fn delta_terms(
    alg: &Cdga,
    f: &CochainElt,
    d_preimage: &HashMap<ElemId, Vec<(ElemId, Scalar)>>,
    mul_preimage: &HashMap<ElemId, Vec<(ElemId, ElemId, Scalar)>>,
) -> Vec<(Scalar, CochainElt)> {
    let n = f.degree(alg);
    let sign_f = if n % 2 != 0 { -1 } else { 1 };
    let mut out: Vec<(Scalar, CochainElt)> = Vec::new();

    // d after f
    for (e, c) in alg.d_basis(f.target) {
        out.push((c.clone(), CochainElt {
            word: f.word.clone(),
            target: *e,
        }));
    }

    // f after a letter differential: input words w with d(w_i) hitting f.word
    for i in 0..f.word.len() {
        if let Some(pre) = d_preimage.get(&f.word[i]) {
            let eps = suspension(alg, &f.word[..i]);
            // ε uses the input word, which differs from f.word only at i
            for (g, c) in pre {
                if alg.degree(*g) <= 1 {
                    continue;
                }
                let mut word = f.word.clone();
                word[i] = *g;
                let mut coeff = c * int(sign_f);
                if eps % 2 != 0 {
                    coeff = -coeff;
                }
                out.push((coeff, CochainElt {
                    word,
                    target: f.target,
                }));
            }
        }
    }

    // left action: w = g ++ f.word
    for g in alg.augmentation_ideal().collect::<Vec<_>>() {
        for (e, c) in alg.mul_basis(g, f.target) {
            let mut word = Vec::with_capacity(f.word.len() + 1);
            word.push(g);
            word.extend_from_slice(&f.word);
            let mut coeff = -c.clone() * int(sign_f);
            if (n * alg.degree(g)) % 2 != 0 {
                coeff = -coeff;
            }
            out.push((coeff, CochainElt { word, target: *e }));
        }
    }

    // unmerging: w = f.word with letter t expanded into a product pair
    for t in 0..f.word.len() {
        if let Some(pre) = mul_preimage.get(&f.word[t]) {
            let eps_prefix = suspension(alg, &f.word[..t]);
            for (g, h, c) in pre {
                let mut word = Vec::with_capacity(f.word.len() + 1);
                word.extend_from_slice(&f.word[..t]);
                word.push(*g);
                word.push(*h);
                word.extend_from_slice(&f.word[t + 1..]);
                let eps = eps_prefix + alg.degree(*g) - 1;
                let mut coeff = -c * int(sign_f);
                if eps % 2 != 0 {
                    coeff = -coeff;
                }
                out.push((coeff, CochainElt {
                    word,
                    target: f.target,
                }));
            }
        }
    }

    // right action: w = f.word ++ g
    let eps_tail = suspension(alg, &f.word);
    for g in alg.augmentation_ideal().collect::<Vec<_>>() {
        for (e, c) in alg.mul_basis(f.target, g) {
            let mut word = f.word.clone();
            word.push(g);
            let mut coeff = c * int(sign_f);
            if eps_tail % 2 != 0 {
                coeff = -coeff;
            }
            out.push((coeff, CochainElt { word, target: *e }));
        }
    }

    collect_cochain_terms(out)
}

fn cup_basis(
    alg: &Cdga,
    f: &CochainElt,
    n_g: i64,
    g: &CochainElt,
) -> Vec<(Scalar, CochainElt)> {
    let mut word = Vec::with_capacity(f.word.len() + g.word.len());
    word.extend_from_slice(&f.word);
    word.extend_from_slice(&g.word);
    let sign = if (n_g * suspension(alg, &f.word)) % 2 != 0 {
        int(-1)
    } else {
        int(1)
    };
    alg.mul_basis(f.target, g.target)
        .iter()
        .map(|(e, c)| {
            (c * &sign, CochainElt {
                word: word.clone(),
                target: *e,
            })
        })
        .collect()
}

/// Pre-Lie insertion `f∘̄g`: splice `g`'s word into `f` wherever `f` expects
/// the letter `g` outputs, with the Koszul cost of carrying `g` (reduced
/// degree `|g|−1`) past the preceding letters.
fn circle_basis(
    alg: &Cdga,
    f: &CochainElt,
    n_g: i64,
    g: &CochainElt,
) -> Vec<(Scalar, CochainElt)> {
    if alg.degree(g.target) == 0 {
        // normalized insertion drops unit-valued outputs
        return Vec::new();
    }
    let mut out = Vec::new();
    for i in 0..f.word.len() {
        if f.word[i] != g.target {
            continue;
        }
        let mut word = Vec::with_capacity(f.word.len() + g.word.len() - 1);
        word.extend_from_slice(&f.word[..i]);
        word.extend_from_slice(&g.word);
        word.extend_from_slice(&f.word[i + 1..]);
        let exponent = (n_g - 1) * suspension(alg, &f.word[..i]);
        let coeff = if exponent % 2 != 0 { int(-1) } else { int(1) };
        out.push((coeff, CochainElt {
            word,
            target: f.target,
        }));
    }
    out
}

/// Streams over every basis cochain with degree in `lo..=hi` and checks
/// `δ² = 0` by pure formula application, without materializing matrices.
/// Returns the first failing cochain's label.
pub fn verify_cochain_identities(alg: &Cdga, lo: i64, hi: i64) -> std::result::Result<(), String> {
    let report = alg.validate();
    if !report.is_clean() {
        return Err(format!("algebra fails validation: {}", report.violations[0]));
    }
    let hi = hi.min(alg.top_degree());
    let max_susp = alg.top_degree() - lo;
    let words = super::chain::letter_words(alg, max_susp);

    let mut d_preimage: HashMap<ElemId, Vec<(ElemId, Scalar)>> = HashMap::new();
    for g in 0..alg.dim() {
        for (e, c) in alg.d_basis(g) {
            d_preimage.entry(*e).or_default().push((g, c.clone()));
        }
    }
    let mut mul_preimage: HashMap<ElemId, Vec<(ElemId, ElemId, Scalar)>> = HashMap::new();
    for g in alg.augmentation_ideal().collect::<Vec<_>>() {
        for h in alg.augmentation_ideal().collect::<Vec<_>>() {
            for (e, c) in alg.mul_basis(g, h) {
                mul_preimage.entry(*e).or_default().push((g, h, c.clone()));
            }
        }
    }

    for n in lo..=hi {
        for target in 0..alg.dim() {
            let d = alg.degree(target) - n;
            if !(0..=max_susp).contains(&d) {
                continue;
            }
            for w in &words[d as usize] {
                let f = CochainElt {
                    word: w.to_vec(),
                    target,
                };
                let once = delta_terms(alg, &f, &d_preimage, &mul_preimage);
                let mut twice: Vec<(Scalar, CochainElt)> = Vec::new();
                for (c, g) in &once {
                    for (c2, h) in delta_terms(alg, g, &d_preimage, &mul_preimage) {
                        twice.push((c * &c2, h));
                    }
                }
                if !collect_cochain_terms(twice).is_empty() {
                    return Err(format!("δ² ≠ 0 at {}", f.label(alg)));
                }
            }
        }
    }
    Ok(())
}

fn collect_cochain_terms(terms: Vec<(Scalar, CochainElt)>) -> Vec<(Scalar, CochainElt)> {
    let mut acc: BTreeMap<CochainElt, Scalar> = BTreeMap::new();
    for (c, f) in terms {
        if c.is_zero() {
            continue;
        }
        let e = acc.entry(f).or_insert_with(|| int(0));
        *e += c;
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(f, c)| (c, f))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin;

    fn s2_cochains(lo: i64, hi: i64) -> CochainComplex {
        let alg = Arc::new(builtin("S2").unwrap().pd.algebra().clone());
        CochainComplex::build(alg, lo, hi).unwrap()
    }

    #[test]
    fn arity_is_bounded_by_m_minus_n() {
        let cc = s2_cochains(-8, 2);
        for n in -8..=2 {
            for f in cc.basis(n) {
                assert!(f.arity() as i64 <= 2 - n, "arity bound at degree {n}");
            }
        }
    }

    #[test]
    fn unit_cochain_is_a_cocycle() {
        let cc = s2_cochains(-4, 2);
        let u = cc.unit_cochain();
        assert!(cc.complex().differential().apply(0, &u).is_empty());
    }

    #[test]
    fn delta_squares_to_zero_on_window() {
        for name in ["S2", "CP2", "S3"] {
            let alg = Arc::new(builtin(name).unwrap().pd.algebra().clone());
            let m = alg.top_degree();
            let cc = CochainComplex::build(alg, -m - 3, m).unwrap();
            cc.complex().check_square_zero().unwrap();
        }
    }

    #[test]
    fn delta_is_a_derivation_for_cup() {
        // δ(f∪g) = δf∪g + (−1)^{|f|} f∪δg on all basis pairs in a window
        let cc = s2_cochains(-5, 2);
        for n1 in -2..=2 {
            for n2 in -2..=2 {
                if n1 + n2 + 1 > 2 || n1 + n2 < -4 {
                    continue;
                }
                for i in 0..cc.basis(n1).len() {
                    for j in 0..cc.basis(n2).len() {
                        let f = vec![(i, int(1))];
                        let g = vec![(j, int(1))];
                        let lhs = {
                            let fg = cc.cup(n1, &f, n2, &g);
                            cc.complex().differential().apply(n1 + n2, &fg)
                        };
                        let df = cc.complex().differential().apply(n1, &f);
                        let dg = cc.complex().differential().apply(n2, &g);
                        let mut rhs = cc.cup(n1 + 1, &df, n2, &g);
                        let sign = if n1 % 2 != 0 { int(-1) } else { int(1) };
                        let t2 = cc.cup(n1, &f, n2 + 1, &dg);
                        rhs = crate::exactlin::sv_add_scaled(&rhs, &t2, &sign);
                        assert_eq!(lhs, rhs, "Leibniz fails at degrees ({n1},{n2})");
                    }
                }
            }
        }
    }

    #[test]
    fn cup_with_unit_is_identity() {
        let cc = s2_cochains(-6, 2);
        let u = cc.unit_cochain();
        for n in -4..=2 {
            for i in 0..cc.basis(n).len() {
                let f = vec![(i, int(1))];
                assert_eq!(cc.cup(0, &u, n, &f), f);
                assert_eq!(cc.cup(n, &f, 0, &u), f);
            }
        }
    }

    #[test]
    fn cup_of_arity_zero_cochains_multiplies_targets() {
        let cc = s2_cochains(-2, 2);
        let alg = cc.algebra().clone();
        let x = alg.basis_of_degree(2)[0];
        let fx = CochainElt {
            word: vec![],
            target: x,
        };
        let (n, i) = cc.index_of(&fx).unwrap();
        assert_eq!(n, 2);
        // x·x = 0 in the S² model
        assert!(cc.cup(2, &vec![(i, int(1))], 2, &vec![(i, int(1))]).is_empty());

        // on CP² the same cup is the arity-0 cochain [] ↦ x²
        let alg = Arc::new(crate::models::builtin("CP2").unwrap().pd.algebra().clone());
        let cc = CochainComplex::build(alg.clone(), -2, 4).unwrap();
        let x = alg.basis_of_degree(2)[0];
        let x2 = alg.basis_of_degree(4)[0];
        let (n, i) = cc
            .index_of(&CochainElt {
                word: vec![],
                target: x,
            })
            .unwrap();
        let prod = cc.cup(n, &vec![(i, int(1))], n, &vec![(i, int(1))]);
        let (_, j) = cc
            .index_of(&CochainElt {
                word: vec![],
                target: x2,
            })
            .unwrap();
        assert_eq!(prod, vec![(j, int(1))]);
    }

    #[test]
    fn bracket_with_unit_vanishes() {
        let cc = s2_cochains(-6, 2);
        let u = cc.unit_cochain();
        for n in -4..=2 {
            for i in 0..cc.basis(n).len() {
                let f = vec![(i, int(1))];
                assert!(cc.bracket(0, &u, n, &f).is_empty());
                assert!(cc.bracket(n, &f, 0, &u).is_empty());
            }
        }
    }

    #[test]
    fn cup_is_commutative_at_homology_level() {
        // f∪g − (−1)^{|f||g|} g∪f is a coboundary on cocycles of the S² model
        let cc = s2_cochains(-7, 2);
        for n1 in -3..=2i64 {
            for n2 in -3..=2i64 {
                if n1 + n2 > 2 || n1 + n2 < -6 {
                    continue;
                }
                let h1 = cc.complex().homology(n1).unwrap();
                let h2 = cc.complex().homology(n2).unwrap();
                let ht = cc.complex().homology(n1 + n2).unwrap();
                for f in &h1.reps {
                    for g in &h2.reps {
                        let fg = cc.cup(n1, f, n2, g);
                        let gf = cc.cup(n2, g, n1, f);
                        let sign = if (n1 * n2) % 2 != 0 { int(1) } else { int(-1) };
                        let comm = crate::exactlin::sv_add_scaled(&fg, &gf, &sign);
                        assert!(
                            ht.project(&comm).iter().all(num_traits::Zero::is_zero),
                            "cup not commutative in homology at ({n1},{n2})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn bracket_axioms_at_homology_level() {
        // antisymmetry [f,g] + (−1)^{(|f|−1)(|g|−1)}[g,f] and the Jacobi
        // combination are coboundaries on cocycle representatives of S²
        let cc = s2_cochains(-8, 2);
        let window = -3..=2i64;
        for n1 in window.clone() {
            for n2 in window.clone() {
                if n1 + n2 - 1 > 2 || n1 + n2 - 1 < -7 {
                    continue;
                }
                let h1 = cc.complex().homology(n1).unwrap();
                let h2 = cc.complex().homology(n2).unwrap();
                let ht = cc.complex().homology(n1 + n2 - 1).unwrap();
                for f in &h1.reps {
                    for g in &h2.reps {
                        let fg = cc.bracket(n1, f, n2, g);
                        let gf = cc.bracket(n2, g, n1, f);
                        let sign = if ((n1 - 1) * (n2 - 1)) % 2 != 0 {
                            int(-1)
                        } else {
                            int(1)
                        };
                        let anti = crate::exactlin::sv_add_scaled(&fg, &gf, &sign);
                        assert!(
                            ht.project(&anti).iter().all(num_traits::Zero::is_zero),
                            "bracket antisymmetry fails in homology at ({n1},{n2})"
                        );
                    }
                }
            }
        }
        // Jacobi {f,{g,h}} = {{f,g},h} + (−1)^{(|f|−1)(|g|−1)}{g,{f,h}} on a
        // sample of cocycle triples
        for n1 in -2..=2i64 {
            for n2 in -2..=2i64 {
                for n3 in -2..=2i64 {
                    let target = n1 + n2 + n3 - 2;
                    if target < -6 || target > 2 {
                        continue;
                    }
                    let h1 = cc.complex().homology(n1).unwrap();
                    let h2 = cc.complex().homology(n2).unwrap();
                    let h3 = cc.complex().homology(n3).unwrap();
                    let ht = cc.complex().homology(target).unwrap();
                    for f in &h1.reps {
                        for g in &h2.reps {
                            for h in &h3.reps {
                                let gh = cc.bracket(n2, g, n3, h);
                                let lhs = cc.bracket(n1, f, n2 + n3 - 1, &gh);
                                let fg = cc.bracket(n1, f, n2, g);
                                let t1 = cc.bracket(n1 + n2 - 1, &fg, n3, h);
                                let fh = cc.bracket(n1, f, n3, h);
                                let t2 = cc.bracket(n2, g, n1 + n3 - 1, &fh);
                                let sign = if ((n1 - 1) * (n2 - 1)) % 2 != 0 {
                                    int(-1)
                                } else {
                                    int(1)
                                };
                                let mut rhs = t1;
                                rhs = crate::exactlin::sv_add_scaled(&rhs, &t2, &sign);
                                let diff =
                                    crate::exactlin::sv_add_scaled(&lhs, &rhs, &int(-1));
                                assert!(
                                    ht.project(&diff)
                                        .iter()
                                        .all(num_traits::Zero::is_zero),
                                    "Jacobi fails in homology at ({n1},{n2},{n3})"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn cup_is_associative_at_chain_level() {
        let cc = s2_cochains(-6, 2);
        for n1 in -2..=2i64 {
            for n2 in -2..=1i64 {
                for n3 in -2..=1i64 {
                    if n1 + n2 + n3 < -6 || n1 + n2 + n3 > 2 {
                        continue;
                    }
                    for i in 0..cc.basis(n1).len().min(3) {
                        for j in 0..cc.basis(n2).len().min(3) {
                            for k in 0..cc.basis(n3).len().min(3) {
                                let f = vec![(i, int(1))];
                                let g = vec![(j, int(1))];
                                let h = vec![(k, int(1))];
                                let fg = cc.cup(n1, &f, n2, &g);
                                let gh = cc.cup(n2, &g, n3, &h);
                                assert_eq!(
                                    cc.cup(n1 + n2, &fg, n3, &h),
                                    cc.cup(n1, &f, n2 + n3, &gh)
                                );
                            }
                        }
                    }
                }
            }
        }
    }
}
