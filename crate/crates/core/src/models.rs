//! Built-in example models, the on-disk JSON schema, and (de)serialization.
//!
//! One JSON format covers both kinds of model, dispatched on `kind`:
//! `"pd-cdga"` files carry a basis, unit, sparse product table, sparse
//! differential, duality dimension and orientation; `"sullivan"` files carry
//! generators and differential polynomials.  Scalars are `"p"` or `"p/q"`
//! strings.  Unspecified product entries are zero, except products with the
//! unit, which may be omitted.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cdga::{Cdga, CdgaData, PdModel};
use crate::exactlin::{format_scalar, int, parse_scalar, Scalar};
use crate::sullivan::SullivanModel;
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Term {
    pub basis: String,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct BasisEntry {
    pub label: String,
    pub degree: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub value: Vec<Term>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DifferentialEntry {
    pub from: String,
    pub value: Vec<Term>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct MonomialTerm {
    pub monomial: Vec<String>,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SullivanDifferentialEntry {
    pub generator: String,
    pub value: Vec<MonomialTerm>,
}

/// On-disk model, either kind.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind")]
pub enum ModelFile {
    #[serde(rename = "pd-cdga")]
    Pd {
        name: String,
        basis: Vec<BasisEntry>,
        unit: String,
        product: Vec<ProductEntry>,
        differential: Vec<DifferentialEntry>,
        dimension: i64,
        orientation: Option<Vec<Term>>,
    },
    #[serde(rename = "sullivan")]
    Sullivan {
        name: String,
        generators: Vec<GeneratorEntry>,
        differential: Vec<SullivanDifferentialEntry>,
    },
}

/// A parsed and validated model.
#[derive(Clone, Debug)]
pub enum LoadedModel {
    Pd(String, PdModel),
    Sullivan(String, SullivanModel),
}

impl LoadedModel {
    pub fn name(&self) -> &str {
        match self {
            LoadedModel::Pd(n, _) => n,
            LoadedModel::Sullivan(n, _) => n,
        }
    }
}

fn terms_to_data(terms: &[Term]) -> Result<Vec<(String, Scalar)>> {
    terms
        .iter()
        .map(|t| Ok((t.basis.clone(), parse_scalar(&t.coeff).map_err(Error::Parse)?)))
        .collect()
}

/// Builds and validates a model from its file form.  Errors name the first
/// violated axiom.
pub fn model_from_file(file: ModelFile) -> Result<LoadedModel> {
    let loaded = model_from_file_raw(file)?;
    let report = match &loaded {
        LoadedModel::Pd(_, pd) => pd.validate(),
        LoadedModel::Sullivan(_, s) => s.validate(),
    };
    if let Some(v) = report.violations.first() {
        return Err(Error::InvalidModel(v.to_string()));
    }
    Ok(loaded)
}

/// Builds a model without the validation gate; structural problems (bad
/// JSON shapes, unknown labels) are still errors.  The `validate` command
/// uses this so it can report axiom violations itself.
pub fn model_from_file_raw(file: ModelFile) -> Result<LoadedModel> {
    match file {
        ModelFile::Pd {
            name,
            basis,
            unit,
            product,
            differential,
            dimension,
            orientation,
        } => {
            let orientation =
                orientation.ok_or_else(|| Error::Parse("orientation required for pd-cdga".into()))?;
            let algebra = Cdga::new(CdgaData {
                basis: basis.into_iter().map(|b| (b.label, b.degree)).collect(),
                unit,
                products: product
                    .iter()
                    .map(|p| Ok((p.left.clone(), p.right.clone(), terms_to_data(&p.value)?)))
                    .collect::<Result<Vec<_>>>()?,
                differential: differential
                    .iter()
                    .map(|d| Ok((d.from.clone(), terms_to_data(&d.value)?)))
                    .collect::<Result<Vec<_>>>()?,
            })?;
            let mut values = vec![int(0); algebra.basis_of_degree(dimension).len()];
            for t in &orientation {
                let id = algebra
                    .basis_of_degree(dimension)
                    .iter()
                    .position(|&i| algebra.label(i) == t.basis)
                    .ok_or_else(|| {
                        Error::Parse(format!("orientation names `{}` outside degree m", t.basis))
                    })?;
                values[id] = parse_scalar(&t.coeff).map_err(Error::Parse)?;
            }
            let pd = PdModel::new(algebra, dimension, values)?;
            Ok(LoadedModel::Pd(name, pd))
        }
        ModelFile::Sullivan {
            name,
            generators,
            differential,
        } => {
            let model = SullivanModel::new(
                generators.into_iter().map(|g| (g.name, g.degree)).collect(),
                differential
                    .into_iter()
                    .map(|d| {
                        let value = d
                            .value
                            .into_iter()
                            .map(|t| {
                                Ok((t.monomial, parse_scalar(&t.coeff).map_err(Error::Parse)?))
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Ok((d.generator, value))
                    })
                    .collect::<Result<Vec<_>>>()?,
            )?;
            Ok(LoadedModel::Sullivan(name, model))
        }
    }
}

/// Loads a model file from disk; parse errors carry the JSON position.
pub fn load_model(path: impl AsRef<Path>) -> Result<LoadedModel> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
    model_from_file(file)
}

/// Like [`load_model`] but without the validation gate.
pub fn load_model_raw(path: impl AsRef<Path>) -> Result<LoadedModel> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let file: ModelFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.as_ref().display())))?;
    model_from_file_raw(file)
}

/// Serializes a duality model in canonical form: basis sorted by (degree,
/// label), only non-redundant products (upper triangle, no unit rows),
/// nonzero differentials, full orientation.
pub fn pd_to_file(name: &str, pd: &PdModel) -> ModelFile {
    let alg = pd.algebra();
    let basis: Vec<BasisEntry> = (0..alg.dim())
        .map(|i| BasisEntry {
            label: alg.label(i).into(),
            degree: alg.degree(i),
        })
        .collect();
    let mut product = Vec::new();
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            if i == alg.unit() || j == alg.unit() || j < i {
                continue;
            }
            let value = alg.mul_basis(i, j);
            if value.is_empty() {
                continue;
            }
            product.push(ProductEntry {
                left: alg.label(i).into(),
                right: alg.label(j).into(),
                value: value
                    .iter()
                    .map(|(k, c)| Term {
                        basis: alg.label(*k).into(),
                        coeff: format_scalar(c),
                    })
                    .collect(),
            });
        }
    }
    let mut differential = Vec::new();
    for i in 0..alg.dim() {
        let d = alg.d_basis(i);
        if d.is_empty() {
            continue;
        }
        differential.push(DifferentialEntry {
            from: alg.label(i).into(),
            value: d
                .iter()
                .map(|(k, c)| Term {
                    basis: alg.label(*k).into(),
                    coeff: format_scalar(c),
                })
                .collect(),
        });
    }
    let orientation = alg
        .basis_of_degree(pd.dimension)
        .iter()
        .zip(pd.orientation())
        .map(|(&i, c)| Term {
            basis: alg.label(i).into(),
            coeff: format_scalar(c),
        })
        .collect();
    ModelFile::Pd {
        name: name.into(),
        basis,
        unit: alg.label(alg.unit()).into(),
        product,
        differential,
        dimension: pd.dimension,
        orientation: Some(orientation),
    }
}

pub fn sullivan_to_file(name: &str, model: &SullivanModel) -> ModelFile {
    let names = model.names();
    let generators = model
        .generators()
        .iter()
        .map(|(n, d)| GeneratorEntry {
            name: n.clone(),
            degree: *d,
        })
        .collect();
    let mut differential = Vec::new();
    for (i, (gen, _)) in model.generators().iter().enumerate() {
        let d = model.differential(i);
        if d.is_empty() {
            continue;
        }
        differential.push(SullivanDifferentialEntry {
            generator: gen.clone(),
            value: d
                .iter()
                .map(|(m, c)| {
                    let mut letters = Vec::new();
                    for (g, e) in m.exps.iter().enumerate() {
                        for _ in 0..*e {
                            letters.push(names[g].clone());
                        }
                    }
                    MonomialTerm {
                        monomial: letters,
                        coeff: format_scalar(c),
                    }
                })
                .collect(),
        });
    }
    ModelFile::Sullivan {
        name: name.into(),
        generators,
        differential,
    }
}

/// A built-in pair: the cohomology Poincaré duality model together with the
/// matching Sullivan model.
#[derive(Clone, Debug)]
pub struct BuiltinModel {
    pub name: String,
    pub pd: PdModel,
    pub sullivan: SullivanModel,
}

pub const BUILTIN_NAMES: [&str; 11] = [
    "S2", "S3", "S4", "S5", "S6", "S7", "CP2", "CP3", "S2xS3", "S2xS2", "S3xS3",
];

fn sphere_pd(n: i64, gen: &str) -> Result<PdModel> {
    let algebra = Cdga::new(CdgaData {
        basis: vec![("1".into(), 0), (gen.into(), n)],
        unit: "1".into(),
        products: vec![(gen.into(), gen.into(), vec![])],
        differential: vec![],
    })?;
    PdModel::new(algebra, n, vec![int(1)])
}

fn sphere_sullivan(n: i64, gen: &str, partner: &str) -> Result<SullivanModel> {
    if n % 2 != 0 {
        SullivanModel::new(vec![(gen.into(), n)], vec![])
    } else {
        // ⋀(x_n, y_{2n−1}), dy = x²
        SullivanModel::new(
            vec![(gen.into(), n), (partner.into(), 2 * n - 1)],
            vec![(partner.into(), vec![(vec![gen.into(), gen.into()], int(1))])],
        )
    }
}

fn projective_pd(n: i64) -> Result<PdModel> {
    // ℚ[x]/x^{n+1}, |x| = 2, ∫ x^n = 1
    let label = |k: i64| {
        if k == 0 {
            "1".to_string()
        } else if k == 1 {
            "x".to_string()
        } else {
            format!("x^{k}")
        }
    };
    let basis = (0..=n).map(|k| (label(k), 2 * k)).collect();
    let mut products = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            let value = if i + j <= n {
                vec![(label(i + j), int(1))]
            } else {
                vec![]
            };
            products.push((label(i), label(j), value));
        }
    }
    let algebra = Cdga::new(CdgaData {
        basis,
        unit: "1".into(),
        products,
        differential: vec![],
    })?;
    PdModel::new(algebra, 2 * n, vec![int(1)])
}

fn projective_sullivan(n: i64) -> Result<SullivanModel> {
    // ⋀(x₂, y_{2n+1}), dy = x^{n+1}
    SullivanModel::new(
        vec![("x".into(), 2), ("y".into(), 2 * n + 1)],
        vec![(
            "y".into(),
            vec![(vec!["x".into(); (n + 1) as usize], int(1))],
        )],
    )
}

fn tensor_sullivan(a: &SullivanModel, b: &SullivanModel) -> Result<SullivanModel> {
    let a_names: Vec<String> = a.names();
    let rename = |n: &str| -> String {
        if a_names.iter().any(|m| m == n) {
            format!("{n}'")
        } else {
            n.to_string()
        }
    };
    let mut generators: Vec<(String, i64)> = a.generators().to_vec();
    for (n, d) in b.generators() {
        generators.push((rename(n), *d));
    }
    let mut differential = Vec::new();
    for (i, (gen, _)) in a.generators().iter().enumerate() {
        let d = a.differential(i);
        if d.is_empty() {
            continue;
        }
        differential.push((
            gen.clone(),
            d.iter()
                .map(|(m, c)| {
                    let mut letters = Vec::new();
                    for (g, e) in m.exps.iter().enumerate() {
                        for _ in 0..*e {
                            letters.push(a_names[g].clone());
                        }
                    }
                    (letters, c.clone())
                })
                .collect::<Vec<_>>(),
        ));
    }
    let b_names = b.names();
    for (i, (gen, _)) in b.generators().iter().enumerate() {
        let d = b.differential(i);
        if d.is_empty() {
            continue;
        }
        differential.push((
            rename(gen),
            d.iter()
                .map(|(m, c)| {
                    let mut letters = Vec::new();
                    for (g, e) in m.exps.iter().enumerate() {
                        for _ in 0..*e {
                            letters.push(rename(&b_names[g]));
                        }
                    }
                    (letters, c.clone())
                })
                .collect::<Vec<_>>(),
        ));
    }
    SullivanModel::new(generators, differential)
}

/// Built-in models: spheres `S^n` (2 ≤ n ≤ 7), complex projective spaces and
/// three product manifolds.  Generated in code; `export-builtins` writes
/// them to disk for reference.
pub fn builtin(name: &str) -> Result<BuiltinModel> {
    let (pd, sullivan) = match name {
        "S2" => (sphere_pd(2, "x")?, sphere_sullivan(2, "x", "y")?),
        "S3" => (sphere_pd(3, "x")?, sphere_sullivan(3, "x", "y")?),
        "S4" => (sphere_pd(4, "x")?, sphere_sullivan(4, "x", "y")?),
        "S5" => (sphere_pd(5, "x")?, sphere_sullivan(5, "x", "y")?),
        "S6" => (sphere_pd(6, "x")?, sphere_sullivan(6, "x", "y")?),
        "S7" => (sphere_pd(7, "x")?, sphere_sullivan(7, "x", "y")?),
        "CP2" => (projective_pd(2)?, projective_sullivan(2)?),
        "CP3" => (projective_pd(3)?, projective_sullivan(3)?),
        "S2xS3" => {
            let (a, b) = (builtin("S2")?, builtin("S3")?);
            (a.pd.tensor(&b.pd)?, tensor_sullivan(&a.sullivan, &b.sullivan)?)
        }
        "S2xS2" => {
            let a = builtin("S2")?;
            let b_pd = sphere_pd(2, "z")?;
            let b_sul = sphere_sullivan(2, "z", "w")?;
            (a.pd.tensor(&b_pd)?, tensor_sullivan(&a.sullivan, &b_sul)?)
        }
        "S3xS3" => {
            let a = builtin("S3")?;
            let b_pd = sphere_pd(3, "z")?;
            let b_sul = sphere_sullivan(3, "z", "w")?;
            (a.pd.tensor(&b_pd)?, tensor_sullivan(&a.sullivan, &b_sul)?)
        }
        other => return Err(Error::UnknownBuiltin(other.into())),
    };
    Ok(BuiltinModel {
        name: name.into(),
        pd,
        sullivan,
    })
}

/// Writes every built-in pair to `dir` as `<name>.pd.json` and
/// `<name>.sullivan.json`; returns the paths written.
pub fn export_builtins(dir: impl AsRef<Path>) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir.as_ref())?;
    let mut written = Vec::new();
    for name in BUILTIN_NAMES {
        let b = builtin(name)?;
        let pd_path = dir.as_ref().join(format!("{name}.pd.json"));
        std::fs::write(
            &pd_path,
            serde_json::to_string_pretty(&pd_to_file(name, &b.pd)).expect("serialize"),
        )?;
        written.push(pd_path);
        let sul_path = dir.as_ref().join(format!("{name}.sullivan.json"));
        std::fs::write(
            &sul_path,
            serde_json::to_string_pretty(&sullivan_to_file(name, &b.sullivan)).expect("serialize"),
        )?;
        written.push(sul_path);
    }
    Ok(written)
}

/// Orientation flip, used to confirm the axioms are robust under `∫ ↦ −∫`.
pub fn flip_orientation(pd: &PdModel) -> Result<PdModel> {
    let values = pd.orientation().iter().map(|c| -c.clone()).collect();
    PdModel::new(pd.algebra().clone(), pd.dimension, values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_validate() {
        for name in BUILTIN_NAMES {
            let b = builtin(name).unwrap();
            assert!(b.pd.validate().is_clean(), "{name} pd");
            assert!(b.sullivan.validate().is_clean(), "{name} sullivan");
        }
    }

    #[test]
    fn builtin_values() {
        let s3 = builtin("S3").unwrap();
        assert_eq!(s3.pd.dimension, 3);
        assert_eq!(s3.pd.algebra().dim(), 2);
        assert_eq!(s3.sullivan.generators(), &[("x".to_string(), 3)]);

        let cp2 = builtin("CP2").unwrap();
        assert_eq!(cp2.pd.dimension, 4);
        assert_eq!(cp2.pd.algebra().dim(), 3);

        let s2xs3 = builtin("S2xS3").unwrap();
        assert_eq!(s2xs3.pd.dimension, 5);

        assert!(builtin("K3").is_err());
    }

    #[test]
    fn export_and_reload_round_trip() {
        let dir = std::env::temp_dir().join("loopcalc-models-test");
        let files = export_builtins(&dir).unwrap();
        assert_eq!(files.len(), 2 * BUILTIN_NAMES.len());
        for path in &files {
            let loaded = load_model(path).unwrap();
            // serialize again and compare canonically
            let again = match &loaded {
                LoadedModel::Pd(name, pd) => pd_to_file(name, pd),
                LoadedModel::Sullivan(name, s) => sullivan_to_file(name, s),
            };
            let text = std::fs::read_to_string(path).unwrap();
            let original: ModelFile = serde_json::from_str(&text).unwrap();
            assert_eq!(again, original, "round trip for {}", path.display());
        }
        std::fs::remove_dir_all(&dir).ok();
    }

    #[test]
    fn missing_orientation_is_rejected() {
        let text = r#"{
            "kind": "pd-cdga", "name": "bad",
            "basis": [{"label": "1", "degree": 0}, {"label": "x", "degree": 2}],
            "unit": "1", "product": [], "differential": [], "dimension": 2
        }"#;
        let file: ModelFile = serde_json::from_str(text).unwrap();
        let err = model_from_file(file).unwrap_err();
        assert!(err.to_string().contains("orientation required for pd-cdga"));
    }

    #[test]
    fn fractional_coefficients_round_trip() {
        // a rescaled S³ Sullivan model: dy = 3/2·x·x on an even generator
        let text = r#"{
            "kind": "sullivan", "name": "scaled",
            "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3}],
            "differential": [
                {"generator": "y", "value": [{"monomial": ["x", "x"], "coeff": "3/2"}]}
            ]
        }"#;
        let file: ModelFile = serde_json::from_str(text).unwrap();
        let LoadedModel::Sullivan(name, model) = model_from_file(file).unwrap() else {
            panic!("expected a sullivan model");
        };
        assert!(model.validate().is_clean());
        let again = sullivan_to_file(&name, &model);
        let json = serde_json::to_string(&again).unwrap();
        assert!(json.contains("3/2"), "{json}");
        // the free loop model scales accordingly: d̄(ȳ) = −3 x x̄
        let flm = crate::sullivan::FreeLoopModel::build(&model).unwrap();
        let names = flm.names().to_vec();
        let yb = names.iter().position(|n| n == "y_bar").unwrap();
        let dyb = flm.apply_dbar(&crate::sullivan::Monomial::generator(names.len(), yb));
        assert_eq!(dyb.values().next().unwrap(), &crate::exactlin::int(-3));
    }

    #[test]
    fn degree_one_basis_element_is_rejected() {
        let text = r#"{
            "kind": "pd-cdga", "name": "bad",
            "basis": [{"label": "1", "degree": 0}, {"label": "t", "degree": 1},
                      {"label": "x", "degree": 2}],
            "unit": "1", "product": [], "differential": [], "dimension": 2,
            "orientation": [{"basis": "x", "coeff": "1"}]
        }"#;
        let file: ModelFile = serde_json::from_str(text).unwrap();
        let err = model_from_file(file).unwrap_err();
        assert!(err.to_string().contains("1-connected input required"));
    }
}
