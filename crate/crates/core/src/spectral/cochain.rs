use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

/// A q-form: one value per q-simplex, in the order of the complex's `S_q` list.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochain {
    q: usize,
    values: Vec<f64>,
}

impl Cochain {
    pub fn new(q: usize, values: Vec<f64>) -> Self {
        Self { q, values }
    }

    pub fn zeros(k: &SimplicialComplex, q: usize) -> Self {
        Self::new(q, vec![0.0; k.count(q)])
    }

    /// The unit form `1^(q)`.
    pub fn unit(k: &SimplicialComplex, q: usize) -> Self {
        Self::new(q, vec![1.0; k.count(q)])
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Checks that the cochain lives on `S_q` of `k`.
    pub fn check_on(&self, k: &SimplicialComplex) -> Result<()> {
        let expected = k.count(self.q);
        if self.values.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "cochain length",
                expected,
                found: self.values.len(),
            });
        }
        Ok(())
    }
}

pub(crate) fn weighted_dot(w: &[f64], a: &[f64], b: &[f64]) -> f64 {
    w.iter().zip(a).zip(b).map(|((w, a), b)| w * a * b).sum()
}

/// Subtracts the weighted mean in place and returns it.
pub(crate) fn center_in_place(w: &[f64], values: &mut [f64]) -> f64 {
    let total: f64 = w.iter().sum();
    let mean = w.iter().zip(values.iter()).map(|(w, x)| w * x).sum::<f64>() / total;
    values.iter_mut().for_each(|x| *x -= mean);
    mean
}

/// `⟨f, g⟩_K = Σ_τ w(τ) f(τ) g(τ)`.
pub fn inner_product(f: &Cochain, g: &Cochain, k: &SimplicialComplex) -> Result<f64> {
    if f.q != g.q {
        return Err(Error::DimensionMismatch {
            context: "cochain dimensions",
            expected: f.q,
            found: g.q,
        });
    }
    f.check_on(k)?;
    g.check_on(k)?;
    Ok(weighted_dot(k.weights(f.q)?, &f.values, &g.values))
}

/// `f - (⟨f, 1⟩_K / ⟨1, 1⟩_K) · 1`, orthogonal to the unit form.
pub fn center_cochain(f: &Cochain, k: &SimplicialComplex) -> Result<Cochain> {
    if k.count(f.q) == 0 {
        return Err(Error::NoSimplicesAtDimension { q: f.q });
    }
    f.check_on(k)?;
    let mut out = f.clone();
    center_in_place(k.weights(f.q)?, &mut out.values);
    Ok(out)
}
