use std::collections::BTreeMap;
use std::io::Read;

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::relsys::RelationalSystem;

/// Band rows with optional ids, coordinates and region classes.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T: Float> {
    bands: Vec<String>,
    rows: Vec<Vec<T>>,
    ids: Vec<String>,
    coords: Option<Vec<(T, T)>>,
    classes: Option<Vec<String>>,
}

/// Which CSV columns play which role. Unassigned columns are bands unless `bands` is set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ColumnRoles {
    pub id: Option<String>,
    pub lat: Option<String>,
    pub lon: Option<String>,
    pub class: Option<String>,
    pub bands: Option<Vec<String>>,
}

impl ColumnRoles {
    /// Columns named `id`, `lat`, `lon` and `class` take those roles.
    pub fn conventional() -> Self {
        ColumnRoles {
            id: Some("id".into()),
            lat: Some("lat".into()),
            lon: Some("lon".into()),
            class: Some("class".into()),
            bands: None,
        }
    }
}

impl<T: Float> Dataset<T> {
    /// Rows get ids `0..n`.
    pub fn new(bands: Vec<String>, rows: Vec<Vec<T>>) -> Result<Self> {
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::with_ids(bands, rows, ids)
    }

    pub fn with_ids(bands: Vec<String>, rows: Vec<Vec<T>>, ids: Vec<String>) -> Result<Self> {
        if ids.len() != rows.len() {
            return Err(Error::InvalidParameter("one id per row".into()));
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != bands.len() {
                return Err(Error::Parse {
                    line: r + 2,
                    message: format!("expected {} bands, found {}", bands.len(), row.len()),
                });
            }
            if let Some(b) = row.iter().position(|v| !v.is_finite() || *v < T::zero()) {
                return Err(Error::Cell {
                    row: r,
                    column: bands[b].clone(),
                    message: "intensity must be finite and non-negative".into(),
                });
            }
        }
        Ok(Dataset {
            bands,
            rows,
            ids,
            coords: None,
            classes: None,
        })
    }

    pub fn with_classes(mut self, classes: Vec<String>) -> Result<Self> {
        if classes.len() != self.rows.len() {
            return Err(Error::InvalidParameter("one class per row".into()));
        }
        self.classes = Some(classes);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.bands.len()
    }

    pub fn bands(&self) -> &[String] {
        &self.bands
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.rows[i]
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn coords(&self) -> Option<&[(T, T)]> {
        self.coords.as_deref()
    }

    pub fn classes(&self) -> Option<&[String]> {
        self.classes.as_deref()
    }

    /// Reads a headed CSV, applying `roles`.
    pub fn from_csv<R: Read>(reader: R, roles: &ColumnRoles) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        let find = |name: &Option<String>| -> Result<Option<usize>> {
            match name {
                None => Ok(None),
                Some(n) => Ok(header.iter().position(|h| h == n)),
            }
        };
        let id_col = find(&roles.id)?;
        let lat_col = find(&roles.lat)?;
        let lon_col = find(&roles.lon)?;
        let class_col = find(&roles.class)?;
        let band_cols: Vec<usize> = match &roles.bands {
            Some(names) => names
                .iter()
                .map(|n| {
                    header
                        .iter()
                        .position(|h| h == n)
                        .ok_or_else(|| Error::UnknownAttribute(n.clone()))
                })
                .collect::<Result<_>>()?,
            None => (0..header.len())
                .filter(|c| ![id_col, lat_col, lon_col, class_col].contains(&Some(*c)))
                .collect(),
        };
        if band_cols.is_empty() {
            return Err(Error::InvalidParameter("no band columns".into()));
        }
        let mut rows = Vec::new();
        let mut ids = Vec::new();
        let mut coords = Vec::new();
        let mut classes = Vec::new();
        for (r, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() != header.len() {
                return Err(Error::Parse {
                    line: r + 2,
                    message: format!("expected {} fields, found {}", header.len(), rec.len()),
                });
            }
            let num = |c: usize| -> Result<T> {
                rec[c]
                    .parse::<f64>()
                    .ok()
                    .and_then(T::from)
                    .ok_or_else(|| Error::Cell {
                        row: r,
                        column: header[c].clone(),
                        message: format!("`{}` is not a number", &rec[c]),
                    })
            };
            rows.push(band_cols.iter().map(|&c| num(c)).collect::<Result<Vec<T>>>()?);
            ids.push(id_col.map_or_else(|| r.to_string(), |c| rec[c].to_string()));
            if let (Some(la), Some(lo)) = (lat_col, lon_col) {
                coords.push((num(la)?, num(lo)?));
            }
            if let Some(c) = class_col {
                classes.push(rec[c].to_string());
            }
        }
        let bands = band_cols.iter().map(|&c| header[c].clone()).collect();
        let mut ds = Self::with_ids(bands, rows, ids)?;
        if lat_col.is_some() && lon_col.is_some() {
            ds.coords = Some(coords);
        }
        if class_col.is_some() {
            ds.classes = Some(classes);
        }
        Ok(ds)
    }
}

pub fn load_dataset<T: Float>(path: &std::path::Path, roles: &ColumnRoles) -> Result<Dataset<T>> {
    Dataset::from_csv(std::fs::File::open(path)?, roles)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    #[default]
    Euclidean,
    Chebyshev,
}

impl Metric {
    pub fn distance<T: Float>(self, a: &[T], b: &[T]) -> T {
        let diffs = a.iter().zip(b).map(|(&x, &y)| (x - y).abs());
        match self {
            Metric::Euclidean => diffs.fold(T::zero(), |s, d| s + d * d).sqrt(),
            Metric::Chebyshev => diffs.fold(T::zero(), T::max),
        }
    }
}

/// Distance threshold, global or looked up by the class of the first row of a pair.
#[derive(Clone, Debug, PartialEq)]
pub enum Threshold<T> {
    Global(T),
    PerClass(BTreeMap<String, T>),
}

impl<T: Float> Threshold<T> {
    fn resolve(&self, ds: &Dataset<T>) -> Result<Vec<T>> {
        let eps: Vec<T> = match self {
            Threshold::Global(e) => vec![*e; ds.len()],
            Threshold::PerClass(map) => {
                let classes = ds
                    .classes()
                    .ok_or_else(|| Error::InvalidParameter("per-class threshold needs a class column".into()))?;
                classes
                    .iter()
                    .map(|c| {
                        map.get(c)
                            .copied()
                            .ok_or_else(|| Error::InvalidParameter(format!("no threshold for class `{c}`")))
                    })
                    .collect::<Result<_>>()?
            }
        };
        if eps.iter().any(|e| e.is_nan() || *e <= T::zero()) {
            return Err(Error::InvalidParameter("threshold must be positive".into()));
        }
        Ok(eps)
    }
}

/// `Rac ⟺ a ≤ c componentwise ∧ ρ(a, c) ≤ ε`, over row ids.
pub fn step1_relation<T: Float>(ds: &Dataset<T>, rho: Metric, eps: &Threshold<T>) -> Result<RelationalSystem> {
    let eps = eps.resolve(ds)?;
    let mut pairs = Vec::new();
    for (a, ra) in ds.rows().iter().enumerate() {
        for (c, rc) in ds.rows().iter().enumerate() {
            let dominated = ra.iter().zip(rc).all(|(x, y)| x <= y);
            if dominated && rho.distance(ra, rc) <= eps[a] {
                pairs.push((a, c));
            }
        }
    }
    RelationalSystem::from_ids(ds.ids().to_vec(), pairs)
}
