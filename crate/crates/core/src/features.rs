//! Point features and q-point features, and the cochains they induce on a
//! complex.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::spectral::{center_in_place, Cochain, ZERO_VARIANCE_TOLERANCE};

/// How a point feature is pushed onto a simplex with several vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    #[default]
    Mean,
    Min,
    Max,
}

impl Aggregation {
    fn fold(self, values: impl Iterator<Item = f64>) -> f64 {
        match self {
            Aggregation::Mean => {
                let (sum, n) = values.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
                sum / n as f64
            }
            Aggregation::Min => values.fold(f64::INFINITY, f64::min),
            Aggregation::Max => values.fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mean" => Ok(Self::Mean),
            "min" => Ok(Self::Min),
            "max" => Ok(Self::Max),
            other => Err(Error::invalid(format!("unknown aggregation {other:?}"))),
        }
    }
}

impl fmt::Display for Aggregation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mean => "mean",
            Self::Min => "min",
            Self::Max => "max",
        })
    }
}

/// Values of one q-point feature keyed by strictly ascending sample tuples.
#[derive(Debug, Clone, PartialEq)]
pub struct TupleTable {
    arity: usize,
    values: HashMap<Vec<usize>, f64>,
    fill: Option<f64>,
}

impl TupleTable {
    /// `fill`, when set, is returned for tuples absent from the table.
    pub fn new(arity: usize, fill: Option<f64>) -> Self {
        Self {
            arity,
            values: HashMap::new(),
            fill,
        }
    }

    /// Inserts a value; the tuple is sorted first, so symmetric features may
    /// be given in either order.
    pub fn insert(&mut self, mut tuple: Vec<usize>, value: f64) -> Result<()> {
        tuple.sort_unstable();
        if tuple.len() != self.arity || tuple.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::invalid(format!(
                "tuple {tuple:?} is not {} distinct samples",
                self.arity
            )));
        }
        self.values.insert(tuple, value);
        Ok(())
    }

    pub fn from_fn(arity: usize, n: usize, f: impl Fn(&[usize]) -> f64) -> Self {
        let mut t = Self::new(arity, None);
        let mut tuple: Vec<usize> = (0..arity).collect();
        if arity == 0 || arity > n {
            return t;
        }
        loop {
            t.values.insert(tuple.clone(), f(&tuple));
            // next combination in lexicographic order
            let mut i = arity;
            while i > 0 && tuple[i - 1] == n - arity + i - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            tuple[i - 1] += 1;
            for j in i..arity {
                tuple[j] = tuple[j - 1] + 1;
            }
        }
        t
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at an ascending tuple.
    pub fn get(&self, tuple: &[usize]) -> Result<f64> {
        match self.values.get(tuple) {
            Some(&v) => Ok(v),
            None => self.fill.ok_or_else(|| Error::MissingTupleValue(tuple.to_vec())),
        }
    }

    fn max_index(&self) -> Option<usize> {
        self.values.keys().filter_map(|k| k.last().copied()).max()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureData {
    /// Features × samples.
    Points(Vec<Vec<f64>>),
    Tuples(Vec<TupleTable>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSet {
    names: Vec<String>,
    arity: usize,
    data: FeatureData,
}

impl FeatureSet {
    pub fn from_points(names: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        if names.len() != rows.len() {
            return Err(Error::DimensionMismatch {
                context: "feature names vs rows",
                expected: rows.len(),
                found: names.len(),
            });
        }
        Ok(Self {
            names,
            arity: 1,
            data: FeatureData::Points(rows),
        })
    }

    pub fn from_tuples(names: Vec<String>, arity: usize, tables: Vec<TupleTable>) -> Result<Self> {
        if arity < 2 {
            return Err(Error::invalid("tuple features need arity >= 2"));
        }
        if names.len() != tables.len() {
            return Err(Error::DimensionMismatch {
                context: "feature names vs tables",
                expected: tables.len(),
                found: names.len(),
            });
        }
        if let Some(t) = tables.iter().find(|t| t.arity != arity) {
            return Err(Error::DimensionMismatch {
                context: "tuple arity",
                expected: arity,
                found: t.arity,
            });
        }
        Ok(Self {
            names,
            arity,
            data: FeatureData::Tuples(tables),
        })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn data(&self) -> &FeatureData {
        &self.data
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Dimension of the cochains these features induce. Point features go to
    /// the requested `q`; q-point features always induce (q-1)-forms.
    pub fn cochain_dim(&self, requested_q: usize) -> Result<usize> {
        if self.arity == 1 || requested_q == self.arity - 1 {
            Ok(requested_q)
        } else {
            Err(Error::invalid(format!(
                "{}-point features induce {}-forms, not {requested_q}-forms",
                self.arity,
                self.arity - 1
            )))
        }
    }

    /// Induces feature `r` at dimension `q` with samples relabelled by
    /// `perm` (sample `v` takes the value of sample `perm[v]`).
    pub(crate) fn inducer<'a>(
        &'a self,
        r: usize,
        k: &'a SimplicialComplex,
        q: usize,
        agg: Aggregation,
    ) -> Result<Inducer<'a>> {
        let q = self.cochain_dim(q)?;
        if k.count(q) == 0 {
            return Err(Error::NoSimplicesAtDimension { q });
        }
        let source = match &self.data {
            FeatureData::Points(rows) => {
                let row = &rows[r];
                if row.len() != k.vertex_count() {
                    return Err(Error::DimensionMismatch {
                        context: "feature sample count",
                        expected: k.vertex_count(),
                        found: row.len(),
                    });
                }
                Source::Points(row, agg)
            }
            FeatureData::Tuples(tables) => {
                let t = &tables[r];
                if let Some(m) = t.max_index().filter(|&m| m >= k.vertex_count()) {
                    return Err(Error::DimensionMismatch {
                        context: "tuple sample index",
                        expected: k.vertex_count(),
                        found: m + 1,
                    });
                }
                Source::Tuples(t)
            }
        };
        Ok(Inducer { k, q, source })
    }
}

enum Source<'a> {
    Points(&'a [f64], Aggregation),
    Tuples(&'a TupleTable),
}

pub(crate) struct Inducer<'a> {
    k: &'a SimplicialComplex,
    q: usize,
    source: Source<'a>,
}

impl Inducer<'_> {
    pub(crate) fn q(&self) -> usize {
        self.q
    }

    pub(crate) fn len(&self) -> usize {
        self.k.count(self.q)
    }

    pub(crate) fn induce_permuted(&self, perm: &[usize], out: &mut [f64], scratch: &mut Vec<usize>) -> Result<()> {
        let simplices = self.k.simplices(self.q);
        match self.source {
            Source::Points(f, agg) => {
                if self.q == 0 {
                    for (o, &p) in out.iter_mut().zip(perm) {
                        *o = f[p];
                    }
                } else {
                    for (o, s) in out.iter_mut().zip(simplices) {
                        *o = agg.fold(s.vertices().iter().map(|&v| f[perm[v]]));
                    }
                }
            }
            Source::Tuples(table) => {
                for (o, s) in out.iter_mut().zip(simplices) {
                    scratch.clear();
                    scratch.extend(s.vertices().iter().map(|&v| perm[v]));
                    scratch.sort_unstable();
                    *o = table.get(scratch)?;
                }
            }
        }
        Ok(())
    }
}

/// Pushes a point feature onto the q-simplices: each simplex takes the
/// aggregate of the feature over its vertices. At `q = 0` this is the
/// feature itself.
pub fn induce_from_point_feature(
    f: &[f64],
    k: &SimplicialComplex,
    q: usize,
    agg: Aggregation,
) -> Result<Cochain> {
    if f.len() != k.vertex_count() {
        return Err(Error::DimensionMismatch {
            context: "feature sample count",
            expected: k.vertex_count(),
            found: f.len(),
        });
    }
    if k.count(q) == 0 {
        return Err(Error::NoSimplicesAtDimension { q });
    }
    let values = k
        .simplices(q)
        .iter()
        .map(|s| agg.fold(s.vertices().iter().map(|&v| f[v])))
        .collect();
    Ok(Cochain::new(q, values))
}

/// Evaluates a q-point feature on every (q-1)-simplex at its ascending
/// vertex order.
pub fn induce_from_qpoint_feature(table: &TupleTable, k: &SimplicialComplex) -> Result<Cochain> {
    if table.arity == 0 {
        return Err(Error::invalid("tuple features need arity >= 1"));
    }
    let q = table.arity - 1;
    if k.count(q) == 0 {
        return Err(Error::NoSimplicesAtDimension { q });
    }
    let values = k
        .simplices(q)
        .iter()
        .map(|s| table.get(s.vertices()))
        .collect::<Result<_>>()?;
    Ok(Cochain::new(q, values))
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureStatus {
    Ok,
    ZeroVariance,
    DimensionMismatch { expected: usize, found: usize },
    MissingTupleValue(Vec<usize>),
    Invalid(String),
}

impl FeatureStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, FeatureStatus::Ok)
    }
}

impl fmt::Display for FeatureStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ok => write!(f, "ok"),
            Self::ZeroVariance => write!(f, "zero variance after induction"),
            Self::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} samples, found {found}")
            }
            Self::MissingTupleValue(t) => write!(f, "missing value for tuple {t:?}"),
            Self::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for FeatureStatus {
    fn from(e: Error) -> Self {
        match e {
            Error::DimensionMismatch { expected, found, .. } => Self::DimensionMismatch { expected, found },
            Error::MissingTupleValue(t) => Self::MissingTupleValue(t),
            Error::ZeroVarianceFeature { .. } => Self::ZeroVariance,
            other => Self::Invalid(other.to_string()),
        }
    }
}

/// Per-feature check that induction succeeds and leaves a non-constant
/// cochain. Never fails as a whole.
pub fn validate_features(
    fs: &FeatureSet,
    k: &SimplicialComplex,
    q: usize,
    agg: Aggregation,
) -> Vec<FeatureStatus> {
    let identity: Vec<usize> = (0..k.vertex_count()).collect();
    (0..fs.len())
        .map(|r| {
            let inducer = match fs.inducer(r, k, q, agg) {
                Ok(i) => i,
                Err(e) => return e.into(),
            };
            let mut values = vec![0.0; inducer.len()];
            if let Err(e) = inducer.induce_permuted(&identity, &mut values, &mut Vec::new()) {
                return e.into();
            }
            let unit;
            let w = match k.weights(inducer.q()) {
                Ok(w) => w,
                Err(_) => {
                    unit = vec![1.0; values.len()];
                    &unit
                }
            };
            let scale: f64 = w.iter().zip(&values).map(|(w, x)| w * x * x).sum();
            center_in_place(w, &mut values);
            let var: f64 = w.iter().zip(&values).map(|(w, x)| w * x * x).sum();
            if !(var > ZERO_VARIANCE_TOLERANCE * scale.max(1.0)) {
                FeatureStatus::ZeroVariance
            } else {
                FeatureStatus::Ok
            }
        })
        .collect()
}
