use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::Zero;

use crate::cdga::{Cdga, ElemId};
use crate::exactlin::{int, Complex, DegreeMap, GradedSpace, Scalar, SparseVec};
use crate::{Error, Result};

/// Basis word `a₀⊗[a₁|…|a_k]` of the normalized Hochschild chain complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    pub head: ElemId,
    pub letters: Vec<ElemId>,
}

impl Word {
    pub fn new(head: ElemId, letters: Vec<ElemId>) -> Self {
        Word { head, letters }
    }

    pub fn degree(&self, alg: &Cdga) -> i64 {
        alg.degree(self.head) + suspension(alg, &self.letters)
    }

    pub fn label(&self, alg: &Cdga) -> String {
        let letters: Vec<&str> = self.letters.iter().map(|l| alg.label(*l)).collect();
        format!("{}[{}]", alg.label(self.head), letters.join("|"))
    }

    fn sort_key(&self) -> (usize, ElemId, Vec<ElemId>) {
        (self.letters.len(), self.head, self.letters.clone())
    }
}

pub(crate) fn suspension(alg: &Cdga, letters: &[ElemId]) -> i64 {
    letters.iter().map(|l| alg.degree(*l) - 1).sum()
}

/// Word length of the filtration `F_p`: words with at most `p` letters.
pub fn filtration_level(word: &Word) -> usize {
    word.letters.len()
}

/// The cyclic bar differential `∂ = d₀ + d₁` applied to one word, as a sparse
/// combination of words.  Pure formula, valid in any degree.
pub fn boundary_terms(alg: &Cdga, w: &Word) -> Vec<(Scalar, Word)> {
    let mut out: Vec<(Scalar, Word)> = Vec::new();
    let head_deg = alg.degree(w.head);
    let k = w.letters.len();

    // d(a₀)
    for (e, c) in alg.d_basis(w.head) {
        out.push((c.clone(), Word::new(*e, w.letters.clone())));
    }

    // letter differentials, − (−1)^{ε_i}
    let mut eps = head_deg;
    for i in 0..k {
        for (e, c) in alg.d_basis(w.letters[i]) {
            let mut letters = w.letters.clone();
            letters[i] = *e;
            let mut coeff = -c.clone();
            if eps % 2 != 0 {
                coeff = -coeff;
            }
            out.push((coeff, Word::new(w.head, letters)));
        }
        eps += alg.degree(w.letters[i]) - 1;
    }

    if k > 0 {
        // head absorption, (−1)^{|a₀|}
        for (e, c) in alg.mul_basis(w.head, w.letters[0]) {
            let mut coeff = c.clone();
            if head_deg % 2 != 0 {
                coeff = -coeff;
            }
            out.push((coeff, Word::new(*e, w.letters[1..].to_vec())));
        }

        // adjacent merges, (−1)^{ε_i}
        let mut eps = head_deg + alg.degree(w.letters[0]) - 1;
        for i in 1..k {
            for (e, c) in alg.mul_basis(w.letters[i - 1], w.letters[i]) {
                let mut letters = Vec::with_capacity(k - 1);
                letters.extend_from_slice(&w.letters[..i - 1]);
                letters.push(*e);
                letters.extend_from_slice(&w.letters[i + 1..]);
                let mut coeff = c.clone();
                if eps % 2 != 0 {
                    coeff = -coeff;
                }
                out.push((coeff, Word::new(w.head, letters)));
            }
            eps += alg.degree(w.letters[i]) - 1;
        }

        // wrap-around absorption of a_k into the head
        let last = w.letters[k - 1];
        let eps_k = head_deg + suspension(alg, &w.letters[..k - 1]);
        let exponent = eps_k * (1 + alg.degree(last));
        for (e, c) in alg.mul_basis(last, w.head) {
            let mut coeff = -c.clone();
            if exponent % 2 != 0 {
                coeff = -coeff;
            }
            out.push((coeff, Word::new(*e, w.letters[..k - 1].to_vec())));
        }
    }

    collect_terms(out)
}

/// Connes' rotation operator `B` applied to one word.
pub fn connes_terms(alg: &Cdga, w: &Word) -> Vec<(Scalar, Word)> {
    if alg.degree(w.head) == 0 {
        return Vec::new();
    }
    let n = w.letters.len();
    // cyclic list (a₀, a₁, …, a_n) of suspension degrees
    let mut s = Vec::with_capacity(n + 1);
    s.push(alg.degree(w.head) - 1);
    for l in &w.letters {
        s.push(alg.degree(*l) - 1);
    }
    let total: i64 = s.iter().sum();
    let mut out = Vec::with_capacity(n + 1);
    let mut prefix = 0i64; // |sa₀| + … + |sa_{i−1}| over the cyclic list
    for i in 0..=n {
        let exponent = prefix * (total - prefix);
        // rotation starting at a_i of the cyclic word (a₀, a₁, …, a_n)
        let mut letters = Vec::with_capacity(n + 1);
        if i == 0 {
            letters.push(w.head);
            letters.extend_from_slice(&w.letters);
        } else {
            letters.extend_from_slice(&w.letters[i - 1..]);
            letters.push(w.head);
            letters.extend_from_slice(&w.letters[..i - 1]);
        }
        let coeff = if exponent % 2 != 0 { int(-1) } else { int(1) };
        out.push((coeff, Word::new(alg.unit(), letters)));
        prefix += s[i];
    }
    collect_terms(out)
}

pub(crate) fn collect_terms(terms: Vec<(Scalar, Word)>) -> Vec<(Scalar, Word)> {
    let mut acc: BTreeMap<Word, Scalar> = BTreeMap::new();
    for (c, w) in terms {
        if c.is_zero() {
            continue;
        }
        let e = acc.entry(w).or_insert_with(|| int(0));
        *e += c;
    }
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(w, c)| (c, w))
        .collect()
}

/// All letter words `[a₁|…|a_k]` of each suspension degree `0..=max`, letters
/// from `Ā`.  Finite because every letter has suspension degree ≥ 1.
pub fn letter_words(alg: &Cdga, max: i64) -> Vec<Vec<Vec<ElemId>>> {
    let letters: Vec<ElemId> = alg.augmentation_ideal().collect();
    let mut by_degree: Vec<Vec<Vec<ElemId>>> = vec![Vec::new(); (max.max(0) + 1) as usize];
    if max >= 0 {
        by_degree[0].push(Vec::new());
    }
    for d in 1..=max {
        let mut level = Vec::new();
        for &l in &letters {
            let s = alg.degree(l) - 1;
            if s > d {
                continue;
            }
            for tail in &by_degree[(d - s) as usize] {
                let mut w = Vec::with_capacity(tail.len() + 1);
                w.push(l);
                w.extend_from_slice(tail);
                level.push(w);
            }
        }
        level.sort_by_key(|w| (w.len(), w.clone()));
        by_degree[d as usize] = level;
    }
    by_degree
}

/// Ordered word basis of the chain complex for every degree `0..=n_max`.
pub fn chain_word_basis(alg: &Cdga, n_max: i64) -> BTreeMap<i64, Vec<Word>> {
    let words = letter_words(alg, n_max);
    let mut basis: BTreeMap<i64, Vec<Word>> = BTreeMap::new();
    for n in 0..=n_max {
        let mut level: Vec<Word> = Vec::new();
        for head in 0..alg.dim() {
            let d = n - alg.degree(head);
            if d < 0 {
                continue;
            }
            for w in &words[d as usize] {
                level.push(Word::new(head, w.clone()));
            }
        }
        level.sort_by_key(|w| w.sort_key());
        basis.insert(n, level);
    }
    basis
}

/// The normalized Hochschild chain complex of a validated CDGA, truncated at
/// total degree `n_max + 1`.
///
/// Differential blocks are stored for source degrees `0..=n_max`, the
/// rotation operator for all stored degrees.  Homology is complete for
/// degrees ≤ `n_max`.  `∂² = 0`, `B² = 0` and `B∂ + ∂B = 0` are verified
/// exactly on the stored range during construction.
#[derive(Clone, Debug)]
pub struct HochschildComplex {
    alg: Arc<Cdga>,
    n_max: i64,
    words: BTreeMap<i64, Vec<Word>>,
    index: HashMap<Word, (i64, usize)>,
    complex: Complex,
    connes: DegreeMap,
}

impl HochschildComplex {
    pub fn build(alg: Arc<Cdga>, n_max: i64) -> Result<HochschildComplex> {
        let report = alg.validate();
        if !report.is_clean() {
            return Err(Error::InvalidModel(format!(
                "algebra fails validation: {}",
                report.violations[0]
            )));
        }
        let words = chain_word_basis(&alg, n_max + 1);
        let mut index = HashMap::new();
        let mut degrees = BTreeMap::new();
        for (n, level) in &words {
            for (i, w) in level.iter().enumerate() {
                index.insert(w.clone(), (*n, i));
            }
            degrees.insert(*n, level.iter().map(|w| w.label(&alg)).collect());
        }
        let space = Arc::new(GradedSpace::new(degrees));

        let to_vec = |terms: Vec<(Scalar, Word)>, degree: i64| -> SparseVec {
            let mut v: SparseVec = terms
                .into_iter()
                .map(|(c, w)| {
                    let (d, i) = *index
                        .get(&w)
                        .unwrap_or_else(|| panic!("missing word of degree {degree}"));
                    debug_assert_eq!(d, degree);
                    (i, c)
                })
                .collect();
            v.sort_by_key(|(i, _)| *i);
            v
        };

        let mut boundary = DegreeMap::zero(space.clone(), space.clone(), 1);
        for n in 0..=n_max {
            let level = &words[&n];
            let mut block =
                crate::exactlin::SparseMatrix::zero(space.dim(n + 1), level.len());
            for (j, w) in level.iter().enumerate() {
                block.set_column(j, to_vec(boundary_terms(&alg, w), n + 1));
            }
            boundary.insert_block(n, block);
        }

        let mut connes = DegreeMap::zero(space.clone(), space.clone(), -1);
        for n in 0..=n_max + 1 {
            let level = &words[&n];
            let rows = space.dim(n - 1);
            let mut block = crate::exactlin::SparseMatrix::zero(rows, level.len());
            for (j, w) in level.iter().enumerate() {
                block.set_column(j, to_vec(connes_terms(&alg, w), n - 1));
            }
            connes.insert_block(n, block);
        }

        let complex = Complex::new(space, boundary);
        if let Err((n, j)) = complex.check_square_zero() {
            return Err(Error::Inconsistent(format!(
                "∂² ≠ 0 at {} (degree {n})",
                words[&n][j].label(&alg)
            )));
        }

        let hc = HochschildComplex {
            alg,
            n_max,
            words,
            index,
            complex,
            connes,
        };
        hc.check_connes_identities()?;
        Ok(hc)
    }

    fn check_connes_identities(&self) -> Result<()> {
        for n in 0..=self.n_max {
            let level = &self.words[&n];
            for (j, w) in level.iter().enumerate() {
                // B²
                let b1 = self.connes.apply(n, &vec![(j, int(1))]);
                if !self.connes.apply(n - 1, &b1).is_empty() {
                    return Err(Error::Inconsistent(format!(
                        "B² ≠ 0 at {}",
                        w.label(&self.alg)
                    )));
                }
                // B∂ + ∂B
                let db = self.complex.differential().apply(n - 1, &b1);
                let bd = self
                    .connes
                    .apply(n + 1, &self.complex.differential().apply(n, &vec![(j, int(1))]));
                let sum = crate::exactlin::sv_add_scaled(&db, &bd, &int(1));
                if !sum.is_empty() {
                    return Err(Error::Inconsistent(format!(
                        "B∂ + ∂B ≠ 0 at {}",
                        w.label(&self.alg)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<Cdga> {
        &self.alg
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn connes(&self) -> &DegreeMap {
        &self.connes
    }

    pub fn words(&self, n: i64) -> &[Word] {
        self.words.get(&n).map_or(&[], Vec::as_slice)
    }

    pub fn index_of(&self, w: &Word) -> Option<(i64, usize)> {
        self.index.get(w).copied()
    }

    /// Per-degree dimensions, for reporting.
    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.words.iter().map(|(n, ws)| (*n, ws.len())).collect()
    }
}

/// Streams over all basis words of degree ≤ `n_max` and checks `∂² = 0`,
/// `B² = 0`, `B∂ + ∂B = 0` and the filtration bounds `∂F_p ⊆ F_p`,
/// `B F_p ⊆ F_{p+1}` by pure formula application, without materializing
/// matrices.  Returns the first failing identity with a witness word.
pub fn verify_chain_identities(alg: &Cdga, n_max: i64) -> std::result::Result<(), String> {
    let report = alg.validate();
    if !report.is_clean() {
        return Err(format!("algebra fails validation: {}", report.violations[0]));
    }
    let basis = chain_word_basis(alg, n_max);
    for level in basis.values() {
        for w in level {
            let p = filtration_level(w);
            let dw = boundary_terms(alg, w);
            if dw.iter().any(|(_, u)| filtration_level(u) > p) {
                return Err(format!("∂F_p ⊄ F_p at {}", w.label(alg)));
            }
            let ddw = apply_formula(alg, &dw, boundary_terms);
            if !ddw.is_empty() {
                return Err(format!("∂² ≠ 0 at {}", w.label(alg)));
            }
            let bw = connes_terms(alg, w);
            if bw.iter().any(|(_, u)| filtration_level(u) > p + 1) {
                return Err(format!("B F_p ⊄ F_{{p+1}} at {}", w.label(alg)));
            }
            let bbw = apply_formula(alg, &bw, connes_terms);
            if !bbw.is_empty() {
                return Err(format!("B² ≠ 0 at {}", w.label(alg)));
            }
            let mut anti = apply_formula(alg, &bw, boundary_terms);
            anti.extend(apply_formula(alg, &dw, connes_terms));
            if !collect_terms(anti).is_empty() {
                return Err(format!("B∂ + ∂B ≠ 0 at {}", w.label(alg)));
            }
        }
    }
    Ok(())
}

pub(crate) fn apply_formula(
    alg: &Cdga,
    terms: &[(Scalar, Word)],
    f: impl Fn(&Cdga, &Word) -> Vec<(Scalar, Word)>,
) -> Vec<(Scalar, Word)> {
    let mut out = Vec::new();
    for (c, w) in terms {
        for (c2, w2) in f(alg, w) {
            out.push((c * &c2, w2));
        }
    }
    collect_terms(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::builtin;

    fn s2() -> Arc<Cdga> {
        Arc::new(builtin("S2").unwrap().pd.algebra().clone())
    }

    #[test]
    fn s2_word_basis_dimensions() {
        // hand enumeration with |x| = 2, |sx| = 1: degree 0 is 1[], degree 1
        // is 1[x], degree n ≥ 2 holds 1[x…x] (n letters) and x[x…x] (n−2)
        let alg = s2();
        let basis = chain_word_basis(&alg, 8);
        let dims: Vec<usize> = (0..=8).map(|n| basis[&n].len()).collect();
        assert_eq!(dims, vec![1, 1, 2, 2, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn boundary_of_one_letter_word_vanishes_on_s2() {
        // head absorption cancels the wrap term: ∂(1⊗[x]) = x[] − x[] = 0
        let alg = s2();
        let x = alg.basis_of_degree(2)[0];
        let w = Word::new(alg.unit(), vec![x]);
        assert!(boundary_terms(&alg, &w).is_empty());
    }

    #[test]
    fn boundary_of_two_letter_word_on_s2() {
        // ∂(1⊗[x|x]) = 2 x⊗[x]: head and wrap terms reinforce in even parity
        let alg = s2();
        let x = alg.basis_of_degree(2)[0];
        let w = Word::new(alg.unit(), vec![x, x]);
        let terms = boundary_terms(&alg, &w);
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, int(2));
        assert_eq!(terms[0].1, Word::new(x, vec![x]));
    }

    #[test]
    fn d0_vanishes_on_formal_model() {
        // with d = 0 only merging terms survive, so every output word is one
        // letter shorter than the input
        let alg = s2();
        let x = alg.basis_of_degree(2)[0];
        for w in [
            Word::new(alg.unit(), vec![x, x]),
            Word::new(x, vec![x, x, x]),
        ] {
            for (_, u) in boundary_terms(&alg, &w) {
                assert_eq!(u.letters.len(), w.letters.len() - 1);
            }
        }
    }

    #[test]
    fn connes_on_s2_examples() {
        let alg = s2();
        let x = alg.basis_of_degree(2)[0];
        // unit head: B = 0
        assert!(connes_terms(&alg, &Word::new(alg.unit(), vec![x, x])).is_empty());
        // B(x⊗[]) = 1⊗[x]
        let b = connes_terms(&alg, &Word::new(x, vec![]));
        assert_eq!(b, vec![(int(1), Word::new(alg.unit(), vec![x]))]);
        // B(x⊗[x]) = (1 − 1)·1⊗[x|x] = 0
        assert!(connes_terms(&alg, &Word::new(x, vec![x])).is_empty());
    }

    #[test]
    fn chain_identities_small_models() {
        for name in ["S2", "S3", "CP2"] {
            let pd = builtin(name).unwrap().pd;
            verify_chain_identities(pd.algebra(), 9).unwrap();
        }
    }

    #[test]
    fn h0_is_q_and_sphere_betti_are_one() {
        let alg = s2();
        let hc = HochschildComplex::build(alg, 8).unwrap();
        for n in 0..=8 {
            assert_eq!(
                hc.complex().homology(n).unwrap().dim,
                1,
                "dim H^{n}(LS²) should be 1"
            );
        }
    }

    #[test]
    fn filtration_levels() {
        let alg = s2();
        let x = alg.basis_of_degree(2)[0];
        assert_eq!(filtration_level(&Word::new(alg.unit(), vec![])), 0);
        assert_eq!(filtration_level(&Word::new(x, vec![x, x])), 2);
    }

    #[test]
    fn rejects_unvalidated_algebra() {
        let alg = Arc::new(
            crate::cdga::Cdga::new(crate::cdga::CdgaData {
                basis: vec![("1".into(), 0), ("t".into(), 1)],
                unit: "1".into(),
                products: vec![],
                differential: vec![],
            })
            .unwrap(),
        );
        assert!(HochschildComplex::build(alg, 4).is_err());
    }
}
