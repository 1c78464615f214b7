//! Plain-text file formats.
//!
//! Every file is a small TOML document whose first two keys are `format`
//! and `version`. Complex numbers are `[re, im]` pairs and every float is
//! written with 17 significant digits, so reading back a written file
//! reproduces the values bit for bit.

use std::fmt::Write;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::dynamics::Channel;
use crate::error::{Error, Result};
use crate::liftings::LiftingMap;
use crate::measures::{DiscreteMeasure, LiftTable, ProductMeasure, ProjectorMixture};
use crate::operators::Matrix;
use crate::scalar::C;
use crate::states::Pure;
use crate::superop::SuperOp;

pub const VERSION: u32 = 1;

pub const MATRIX: &str = "qlift-matrix";
pub const VECTOR: &str = "qlift-vector";
pub const LIFTING: &str = "qlift-lifting";
pub const CHANNEL: &str = "qlift-channel";
pub const MEASURE: &str = "qlift-measure";
pub const PRODUCT_MEASURE: &str = "qlift-product-measure";
pub const LIFT_TABLE: &str = "qlift-lift-table";
pub const PROJECTOR_LIST: &str = "qlift-projector-list";

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn pair(z: &C<f64>) -> String {
    format!("[{}, {}]", float(z.re), float(z.im))
}

fn header(kind: &str) -> String {
    format!("format = \"{kind}\"\nversion = {VERSION}\n")
}

fn complex_list(out: &mut String, key: &str, zs: &[C<f64>], per_line: usize) {
    writeln!(out, "{key} = [").unwrap();
    for row in zs.chunks(per_line.max(1)) {
        let items: Vec<String> = row.iter().map(pair).collect();
        writeln!(out, "  {},", items.join(", ")).unwrap();
    }
    out.push_str("]\n");
}

fn real_list(out: &mut String, key: &str, xs: &[f64], per_line: usize) {
    writeln!(out, "{key} = [").unwrap();
    for row in xs.chunks(per_line.max(1)) {
        let items: Vec<String> = row.iter().map(|x| float(*x)).collect();
        writeln!(out, "  {},", items.join(", ")).unwrap();
    }
    out.push_str("]\n");
}

#[derive(Deserialize)]
struct Header {
    format: String,
    version: u32,
}

fn parse<D: DeserializeOwned>(text: &str, kind: &str) -> Result<D> {
    let h: Header = toml::from_str(text).map_err(|e| format_error(kind, &e))?;
    if h.format != kind {
        return Err(Error::Format(format!(
            "expected format \"{kind}\", found \"{}\"",
            h.format
        )));
    }
    if h.version != VERSION {
        return Err(Error::Format(format!(
            "unsupported {kind} version {}",
            h.version
        )));
    }
    toml::from_str(text).map_err(|e| format_error(kind, &e))
}

fn format_error(kind: &str, e: &toml::de::Error) -> Error {
    let msg = e
        .message()
        .lines()
        .next()
        .unwrap_or("parse error")
        .to_string();
    Error::Format(format!("{kind}: {msg}"))
}

fn complex(pairs: Vec<[f64; 2]>) -> Vec<C<f64>> {
    pairs.into_iter().map(|[re, im]| C::new(re, im)).collect()
}

fn expect_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::dims(format!(
            "{what}: {got} entries, expected {want}"
        )));
    }
    Ok(())
}

pub fn write_matrix(m: &Matrix<f64>) -> String {
    let mut out = header(MATRIX);
    writeln!(out, "dim = {}", m.dim()).unwrap();
    complex_list(&mut out, "entries", m.as_slice(), m.dim());
    out
}

#[derive(Deserialize)]
struct MatrixDoc {
    dim: usize,
    entries: Vec<[f64; 2]>,
}

pub fn read_matrix(text: &str) -> Result<Matrix<f64>> {
    let doc: MatrixDoc = parse(text, MATRIX)?;
    expect_len("matrix", doc.entries.len(), doc.dim * doc.dim)?;
    Matrix::from_row_major(doc.dim, complex(doc.entries))
}

pub fn write_vector(v: &[C<f64>]) -> String {
    let mut out = header(VECTOR);
    writeln!(out, "dim = {}", v.len()).unwrap();
    complex_list(&mut out, "entries", v, 1);
    out
}

pub fn write_pure(p: &Pure<f64>) -> String {
    write_vector(p.vector())
}

pub fn read_vector(text: &str) -> Result<Vec<C<f64>>> {
    let doc: MatrixDoc = parse(text, VECTOR)?;
    expect_len("vector", doc.entries.len(), doc.dim)?;
    let v = complex(doc.entries);
    if let Some(i) = v
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        return Err(Error::NonFinite(i));
    }
    Ok(v)
}

fn write_superop(kind: &str, dims: &[(&str, usize)], op: &SuperOp<f64>) -> String {
    let mut out = header(kind);
    for (k, v) in dims {
        writeln!(out, "{k} = {v}").unwrap();
    }
    writeln!(out, "rows = {}\ncols = {}", op.rows(), op.cols()).unwrap();
    complex_list(&mut out, "entries", op.entries(), op.cols());
    out
}

#[derive(Deserialize)]
struct LiftingDoc {
    ds: usize,
    de: usize,
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

/// Lifting as its `(ds de)^2 x ds^2` matrix on column-stacked operators.
pub fn write_lifting(f: &LiftingMap<f64>) -> String {
    write_superop(LIFTING, &[("ds", f.ds()), ("de", f.de())], f.superop())
}

pub fn read_lifting(text: &str) -> Result<LiftingMap<f64>> {
    let doc: LiftingDoc = parse(text, LIFTING)?;
    let n = doc.ds * doc.de;
    if doc.rows != n * n || doc.cols != doc.ds * doc.ds {
        return Err(Error::dims(format!(
            "lifting matrix {}x{} for ds = {}, de = {}",
            doc.rows, doc.cols, doc.ds, doc.de
        )));
    }
    let op = SuperOp::from_entries(doc.ds, n, complex(doc.entries))?;
    LiftingMap::from_superop(doc.ds, doc.de, op)
}

#[derive(Deserialize)]
struct ChannelDoc {
    dim: usize,
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

pub fn write_channel(ch: &Channel<f64>) -> String {
    write_superop(CHANNEL, &[("dim", ch.dim())], ch.superop())
}

pub fn read_channel(text: &str) -> Result<Channel<f64>> {
    let doc: ChannelDoc = parse(text, CHANNEL)?;
    let n = doc.dim * doc.dim;
    if doc.rows != n || doc.cols != n {
        return Err(Error::dims(format!(
            "channel matrix {}x{} for dim {}",
            doc.rows, doc.cols, doc.dim
        )));
    }
    Channel::from_superop(SuperOp::from_entries(
        doc.dim,
        doc.dim,
        complex(doc.entries),
    )?)
}

pub fn write_measure(m: &DiscreteMeasure<f64>) -> String {
    let mut out = header(MEASURE);
    writeln!(out, "n = {}", m.len()).unwrap();
    real_list(&mut out, "weights", m.weights(), 4);
    out
}

#[derive(Deserialize)]
struct MeasureDoc {
    n: usize,
    weights: Vec<f64>,
}

/// Signed measure; callers decide whether a probability measure is required.
pub fn read_measure(text: &str) -> Result<DiscreteMeasure<f64>> {
    let doc: MeasureDoc = parse(text, MEASURE)?;
    expect_len("measure", doc.weights.len(), doc.n)?;
    DiscreteMeasure::signed(doc.weights)
}

pub fn write_product_measure(m: &ProductMeasure<f64>) -> String {
    let mut out = header(PRODUCT_MEASURE);
    writeln!(out, "q = {}\np = {}", m.q(), m.p()).unwrap();
    real_list(&mut out, "weights", m.weights(), m.p());
    out
}

#[derive(Deserialize)]
struct ProductDoc {
    q: usize,
    p: usize,
    weights: Vec<f64>,
}

pub fn read_product_measure(text: &str) -> Result<ProductMeasure<f64>> {
    let doc: ProductDoc = parse(text, PRODUCT_MEASURE)?;
    ProductMeasure::signed(doc.q, doc.p, doc.weights)
}

/// Entry `q` holds the row-major `q x p` weights of `f(q)`.
pub fn write_lift_table(t: &LiftTable<f64>) -> String {
    let mut out = header(LIFT_TABLE);
    writeln!(out, "q = {}\np = {}\nentries = [", t.q(), t.p()).unwrap();
    for e in t.entries() {
        let items: Vec<String> = e.weights().iter().map(|x| float(*x)).collect();
        writeln!(out, "  [{}],", items.join(", ")).unwrap();
    }
    out.push_str("]\n");
    out
}

#[derive(Deserialize)]
struct TableDoc {
    q: usize,
    p: usize,
    entries: Vec<Vec<f64>>,
}

pub fn read_lift_table(text: &str) -> Result<LiftTable<f64>> {
    let doc: TableDoc = parse(text, LIFT_TABLE)?;
    expect_len("lift table", doc.entries.len(), doc.q)?;
    let entries = doc
        .entries
        .into_iter()
        .map(|w| ProductMeasure::signed(doc.q, doc.p, w))
        .collect::<Result<Vec<_>>>()?;
    LiftTable::new(entries)
}

pub fn write_projector_list(mu: &ProjectorMixture<f64>) -> String {
    let mut out = header(PROJECTOR_LIST);
    writeln!(out, "dim = {}\nlen = {}", mu.dim(), mu.len()).unwrap();
    let weights: Vec<f64> = mu.entries().iter().map(|(w, _)| *w).collect();
    real_list(&mut out, "weights", &weights, 4);
    out.push_str("vectors = [\n");
    for (_, p) in mu.entries() {
        let items: Vec<String> = p.vector().iter().map(pair).collect();
        writeln!(out, "  [{}],", items.join(", ")).unwrap();
    }
    out.push_str("]\n");
    out
}

#[derive(Deserialize)]
struct ProjectorDoc {
    dim: usize,
    len: usize,
    weights: Vec<f64>,
    vectors: Vec<Vec<[f64; 2]>>,
}

pub fn read_projector_list(text: &str) -> Result<ProjectorMixture<f64>> {
    let doc: ProjectorDoc = parse(text, PROJECTOR_LIST)?;
    expect_len("projector weights", doc.weights.len(), doc.len)?;
    expect_len("projector vectors", doc.vectors.len(), doc.len)?;
    let tol = crate::tolerance::DEFAULT;
    let entries = doc
        .weights
        .into_iter()
        .zip(doc.vectors)
        .map(|(w, v)| {
            expect_len("projector vector", v.len(), doc.dim)?;
            Ok((w, Pure::new(complex(v), &tol)?))
        })
        .collect::<Result<Vec<_>>>()?;
    ProjectorMixture::new(entries)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::liftings::nogo::{nogo_trial_lifting, NogoConfig};
    use crate::measures::split_lift;
    use crate::rng::{random_matrix, seeded};

    #[test]
    fn matrix_layout() {
        let m = Matrix::from_row_major(
            2,
            vec![
                C::new(1.0, 0.0),
                C::new(0.0, -0.5),
                C::new(0.0, 0.5),
                C::new(2.0, 0.0),
            ],
        )
        .unwrap();
        let text = write_matrix(&m);
        assert!(text.starts_with("format = \"qlift-matrix\"\nversion = 1\ndim = 2\n"));
        assert!(text.contains("[1.0000000000000000e0, 0.0000000000000000e0], [0.0000000000000000e0, -5.0000000000000000e-1],"));
        assert_eq!(read_matrix(&text).unwrap(), m);
    }

    #[test]
    fn hand_written_matrix_parses() {
        let text = "format = \"qlift-matrix\"\nversion = 1\ndim = 1\nentries = [[1, 0]]\n";
        assert_eq!(read_matrix(text).unwrap(), Matrix::identity(1));
    }

    #[test]
    fn malformed_inputs() {
        let wrong_kind = write_vector(&[C::new(1.0, 0.0)]);
        assert!(matches!(read_matrix(&wrong_kind), Err(Error::Format(_))));
        assert!(matches!(read_matrix("dim = "), Err(Error::Format(_))));
        let bad_version = "format = \"qlift-matrix\"\nversion = 9\ndim = 1\nentries = [[1, 0]]\n";
        assert!(matches!(read_matrix(bad_version), Err(Error::Format(_))));
        let short = "format = \"qlift-matrix\"\nversion = 1\ndim = 2\nentries = [[1, 0]]\n";
        assert!(matches!(
            read_matrix(short),
            Err(Error::DimensionMismatch(_))
        ));
        let nan = "format = \"qlift-matrix\"\nversion = 1\ndim = 1\nentries = [[nan, 0]]\n";
        assert!(matches!(read_matrix(nan), Err(Error::NonFinite(0))));
    }

    #[test]
    fn lifting_roundtrip() {
        let f = nogo_trial_lifting::<f64>(&NogoConfig::new(2, 3, 1, 0.1, 3), 0);
        let back = read_lifting(&write_lifting(&f)).unwrap();
        assert_eq!(back.superop(), f.superop());
        assert_eq!((back.ds(), back.de()), (2, 3));
        let bad = write_lifting(&f).replace("de = 3", "de = 2");
        assert!(matches!(
            read_lifting(&bad),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn measure_roundtrips() {
        let m = DiscreteMeasure::signed(vec![0.1, -0.3, 1.2]).unwrap();
        assert_eq!(read_measure(&write_measure(&m)).unwrap(), m);
        let t = split_lift::<f64>(&[true, false, false], 2, 0, 1).unwrap();
        let back = read_lift_table(&write_lift_table(&t)).unwrap();
        assert_eq!(back, t);
        let pm = crate::measures::classical_lift(&t, &m).unwrap();
        assert_eq!(
            read_product_measure(&write_product_measure(&pm)).unwrap(),
            pm
        );
    }

    #[test]
    fn bad_table_entry_rejected() {
        let text = "format = \"qlift-lift-table\"\nversion = 1\nq = 2\np = 1\nentries = [[1, 0], [1, 0]]\n";
        assert!(matches!(
            read_lift_table(text),
            Err(Error::BadLiftEntry { q: 1, .. })
        ));
    }

    #[test]
    fn projector_list_roundtrip() {
        let w = crate::measures::nonaffine_witness::<f64>();
        let back = read_projector_list(&write_projector_list(&w.second)).unwrap();
        assert_eq!(back, w.second);
    }

    proptest! {
        #[test]
        fn matrix_roundtrip_is_bit_exact(seed in any::<u64>(), d in 1usize..6, scale in -300i32..300) {
            let m = random_matrix::<f64, _>(&mut seeded(seed), d).scale_real(10f64.powi(scale));
            let back = read_matrix(&write_matrix(&m)).unwrap();
            for (a, b) in m.as_slice().iter().zip(back.as_slice()) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }

        #[test]
        fn vector_roundtrip_is_bit_exact(re in prop::collection::vec(any::<f64>().prop_filter("finite", |x| x.is_finite()), 1..8)) {
            let v: Vec<C<f64>> = re.iter().map(|&x| C::new(x, -x)).collect();
            let back = read_vector(&write_vector(&v)).unwrap();
            for (a, b) in v.iter().zip(&back) {
                prop_assert_eq!(a.re.to_bits(), b.re.to_bits());
                prop_assert_eq!(a.im.to_bits(), b.im.to_bits());
            }
        }
    }
}
