//! Versioned JSON documents for triple models.
//!
//! ```text
//! {version, kind, dims {n, m, dD, dDt}, gram_H, gram_G, embed, embed_t,
//!  T, Tt, G0, G1, G0t, G1t, metadata {green_defect, lambda0, symmetric}}
//! ```
//!
//! Matrices are nested row arrays of `[re, im]` pairs. `G1` is the inward
//! conormal trace, so the Weyl matrix of a symmetric model is negative definite
//! below its spectrum. Loading only checks structure; the Green defect is
//! recomputed and reported, not enforced.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{ComplexMatrix, WeightedSpace};
use crate::triple::{RawTriple, TripleModel};

pub const MODEL_FORMAT_VERSION: u32 = 1;

type Rows = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
struct Dims {
    n: usize,
    m: usize,
    #[serde(rename = "dD")]
    d: usize,
    #[serde(rename = "dDt")]
    dt: usize,
}

#[derive(Serialize, Deserialize)]
struct Metadata {
    green_defect: f64,
    lambda0: Option<[f64; 2]>,
    symmetric: bool,
}

#[derive(Serialize, Deserialize)]
struct Document {
    version: u32,
    kind: String,
    dims: Dims,
    #[serde(rename = "gram_H")]
    gram_h: Rows,
    #[serde(rename = "gram_G")]
    gram_g: Rows,
    embed: Rows,
    embed_t: Rows,
    #[serde(rename = "T")]
    op_t: Rows,
    #[serde(rename = "Tt")]
    op_tt: Rows,
    #[serde(rename = "G0")]
    g0: Rows,
    #[serde(rename = "G1")]
    g1: Rows,
    #[serde(rename = "G0t")]
    g0t: Rows,
    #[serde(rename = "G1t")]
    g1t: Rows,
    metadata: Metadata,
}

fn to_rows(a: &ComplexMatrix) -> Rows {
    a.row_iter()
        .map(|r| r.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn from_rows(rows: &Rows, nrows: usize, ncols: usize, name: &str) -> Result<ComplexMatrix> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::shape(
            format!("model field {name}"),
            format!("{nrows}x{ncols}"),
            format!("{} rows of lengths {:?}", rows.len(), rows.iter().map(Vec::len).collect::<Vec<_>>()),
        ));
    }
    Ok(ComplexMatrix::from_fn(nrows, ncols, |i, j| {
        let [re, im] = rows[i][j];
        Complex64::new(re, im)
    }))
}

/// Serializes a model (pretty-printed, stable field order).
pub fn model_to_json(model: &TripleModel) -> Result<String> {
    let meta = model.metadata();
    let doc = Document {
        version: MODEL_FORMAT_VERSION,
        kind: meta.kind.clone(),
        dims: Dims {
            n: model.n(),
            m: model.m(),
            d: model.dim_d(),
            dt: model.dim_dt(),
        },
        gram_h: to_rows(model.space_h().gram()),
        gram_g: to_rows(model.space_g().gram()),
        embed: to_rows(model.embed()),
        embed_t: to_rows(model.embed_t()),
        op_t: to_rows(model.op_t()),
        op_tt: to_rows(model.op_tt()),
        g0: to_rows(model.g0()),
        g1: to_rows(model.g1()),
        g0t: to_rows(model.g0t()),
        g1t: to_rows(model.g1t()),
        metadata: Metadata {
            green_defect: meta.green_defect,
            lambda0: meta.lambda0.map(|z| [z.re, z.im]),
            symmetric: meta.symmetric,
        },
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

/// Parses a model document. Shapes, finiteness and Gram matrices are checked;
/// the Green identity is only measured (see `metadata().green_defect`).
pub fn model_from_json(text: &str) -> Result<TripleModel> {
    let doc: Document = serde_json::from_str(text)?;
    if doc.version != MODEL_FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported model format version {} (expected {MODEL_FORMAT_VERSION})",
            doc.version
        )));
    }
    let Dims { n, m, d, dt } = doc.dims;
    let raw = RawTriple {
        kind: doc.kind,
        space_h: WeightedSpace::new(from_rows(&doc.gram_h, n, n, "gram_H")?)?,
        space_g: WeightedSpace::new(from_rows(&doc.gram_g, m, m, "gram_G")?)?,
        embed: from_rows(&doc.embed, n, d, "embed")?,
        embed_t: from_rows(&doc.embed_t, n, dt, "embed_t")?,
        op_t: from_rows(&doc.op_t, n, d, "T")?,
        op_tt: from_rows(&doc.op_tt, n, dt, "Tt")?,
        g0: from_rows(&doc.g0, m, d, "G0")?,
        g1: from_rows(&doc.g1, m, d, "G1")?,
        g0t: from_rows(&doc.g0t, m, dt, "G0t")?,
        g1t: from_rows(&doc.g1t, m, dt, "G1t")?,
        symmetric: doc.metadata.symmetric,
        lambda0: doc.metadata.lambda0.map(|[re, im]| Complex64::new(re, im)),
    };
    TripleModel::assemble(raw)
}

pub fn save_model(model: &TripleModel, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, model_to_json(model)?)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<TripleModel> {
    model_from_json(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{sturm_liouville_1d, synthetic_pair, Coefficients1D};

    #[test]
    fn round_trip_is_exact() {
        let model = synthetic_pair(3, 4, 2).unwrap();
        let text = model_to_json(&model).unwrap();
        let back = model_from_json(&text).unwrap();
        assert_eq!(back.op_tt(), model.op_tt());
        assert_eq!(back.space_h().gram(), model.space_h().gram());
        assert_eq!(back.lambda0(), model.lambda0());
        assert_eq!(model_to_json(&back).unwrap(), text);
    }

    #[test]
    fn field_names_follow_the_format() {
        let model = sturm_liouville_1d(&Coefficients1D::laplacian(4)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&model_to_json(&model).unwrap()).unwrap();
        for key in ["version", "kind", "dims", "gram_H", "gram_G", "embed", "embed_t", "T", "Tt", "G0", "G1", "G0t", "G1t", "metadata"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["dims"]["dD"], 6);
        assert_eq!(v["metadata"]["symmetric"], true);
        assert_eq!(v["G1"][0][0], serde_json::json!([-8.0, 0.0]));
    }

    #[test]
    fn corrupted_documents() {
        let model = sturm_liouville_1d(&Coefficients1D::laplacian(4)).unwrap();
        let mut v: serde_json::Value = serde_json::from_str(&model_to_json(&model).unwrap()).unwrap();
        v["G1"][0][1] = serde_json::json!([99.0, 0.0]);
        let bad = model_from_json(&v.to_string()).unwrap();
        assert!(bad.metadata().green_defect > 1e-3);
        v["version"] = serde_json::json!(7);
        assert!(matches!(model_from_json(&v.to_string()), Err(Error::Parse(_))));
        v["version"] = serde_json::json!(1);
        v["T"] = serde_json::json!([]);
        assert!(matches!(model_from_json(&v.to_string()), Err(Error::Shape { .. })));
    }
}
