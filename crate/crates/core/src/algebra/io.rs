use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::matrix::{CdMatrix, Extent};
use crate::error::{Error, Result};
use crate::group::Group;
use crate::io::{fmt17, write_json};
use crate::scalar::{Complex, Real};

/// JSON sidecar stored next to a matrix CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixMeta {
    pub group: String,
    #[serde(rename = "K")]
    pub diagonal_radius: usize,
    #[serde(rename = "N")]
    pub column_radius: usize,
    pub extent: Extent,
}

impl<T: Real> CdMatrix<T> {
    pub fn meta(&self) -> MatrixMeta {
        MatrixMeta {
            group: self.group().kind().to_string(),
            diagonal_radius: self.diagonal_radius(),
            column_radius: self.column_radius(),
            extent: self.extent(),
        }
    }

    /// Writes `z,y,re,im` rows, diagonals and columns in canonical order.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["z", "y", "re", "im"])?;
        for (z, _, v) in self.diagonals() {
            for (y, c) in self.columns().elements().iter().zip(v) {
                wr.write_record([
                    z.to_string(),
                    y.to_string(),
                    fmt17(c.re.as_f64()),
                    fmt17(c.im.as_f64()),
                ])?;
            }
        }
        wr.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(group: &Arc<Group>, meta: &MatrixMeta, r: R) -> Result<CdMatrix<T>> {
        let kind: crate::group::GroupKind = meta.group.parse()?;
        if kind != group.kind() {
            return Err(Error::GroupMismatch {
                left: group.kind().to_string(),
                right: meta.group.clone(),
            });
        }
        let mut a = CdMatrix::zero(group, meta.column_radius, meta.extent)?;
        let cols = a.columns().clone();
        let mut diags: std::collections::BTreeMap<crate::group::Canon, Vec<Complex<T>>> =
            Default::default();
        let mut rd = csv::Reader::from_reader(r);
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse()
                .map_err(|e| Error::Parse(format!("number '{s}': {e}")))
        };
        for rec in rd.records() {
            let rec = rec?;
            if rec.len() != 4 {
                return Err(Error::Parse(format!("expected 4 fields, got {}", rec.len())));
            }
            let z = group.parse_element(&rec[0])?;
            let y = group.parse_element(&rec[1])?;
            let j = cols.position(&y).ok_or_else(|| {
                Error::Parse(format!("column {y} outside the ball of radius {}", meta.column_radius))
            })?;
            let v = Complex::new(T::cast(num(&rec[2])?), T::cast(num(&rec[3])?));
            diags
                .entry(group.canon(&z)?)
                .or_insert_with(|| vec![Complex::new(T::zero(), T::zero()); cols.len()])[j] = v;
        }
        for (k, v) in diags {
            a.insert_diagonal(&k.elem, v)?;
        }
        if a.diagonal_radius() > meta.diagonal_radius {
            return Err(Error::Parse(format!(
                "diagonal radius {} exceeds the declared K = {}",
                a.diagonal_radius(),
                meta.diagonal_radius
            )));
        }
        Ok(a)
    }

    /// Writes `<stem>.csv` and the sidecar `<stem>.json`.
    pub fn save(&self, stem: &Path) -> Result<()> {
        let f = File::create(stem.with_extension("csv"))?;
        self.write_csv(BufWriter::new(f))?;
        write_json(&stem.with_extension("json"), &self.meta())
    }

    pub fn load(group: &Arc<Group>, stem: &Path) -> Result<CdMatrix<T>> {
        let meta: MatrixMeta =
            serde_json::from_reader(BufReader::new(File::open(stem.with_extension("json"))?))?;
        Self::read_csv(group, &meta, BufReader::new(File::open(stem.with_extension("csv"))?))
    }
}
