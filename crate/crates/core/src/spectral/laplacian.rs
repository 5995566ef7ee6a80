//! Weighted combinatorial Laplacians `L^(q) = L↑ + L↓`.
//!
//! With diagonal weight matrices `W_q`, the two parts are
//!
//! ```text
//! L↑ = W_q⁻¹ B_{q+1} W_{q+1} B_{q+1}ᵀ
//! L↓ = B_qᵀ W_{q-1}⁻¹ B_q W_q
//! ```
//!
//! The operator keeps the symmetric form `W_q L` (the matrix of the bilinear
//! form `⟨f, L g⟩_K`) together with `w_q`; `L` itself is recovered by row
//! scaling. [`apply_laplacian_direct`] evaluates the same operator term by
//! term over faces and cofaces and exists to cross-check the assembly.

use std::fmt;
use std::str::FromStr;

use super::boundary::assemble_boundary;
use super::cochain::Cochain;
use crate::complex::{boundary_faces, SimplicialComplex};
use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LaplacianParts {
    Up,
    Down,
    #[default]
    Both,
}

impl LaplacianParts {
    fn up(self) -> bool {
        matches!(self, LaplacianParts::Up | LaplacianParts::Both)
    }

    fn down(self) -> bool {
        matches!(self, LaplacianParts::Down | LaplacianParts::Both)
    }
}

impl FromStr for LaplacianParts {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "up" => Ok(Self::Up),
            "down" => Ok(Self::Down),
            "both" => Ok(Self::Both),
            other => Err(Error::invalid(format!("unknown Laplacian part {other:?}"))),
        }
    }
}

impl fmt::Display for LaplacianParts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Up => "up",
            Self::Down => "down",
            Self::Both => "both",
        })
    }
}

#[derive(Debug, Clone)]
pub struct LaplacianOperator {
    q: usize,
    parts: LaplacianParts,
    weights: Vec<f64>,
    form: CsrMatrix,
}

impl LaplacianOperator {
    pub fn q(&self) -> usize {
        self.q
    }

    pub fn parts(&self) -> LaplacianParts {
        self.parts
    }

    /// Number of q-simplices.
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// Weights `w_q` of the q-simplices.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The symmetric matrix `W_q L`.
    pub fn form(&self) -> &CsrMatrix {
        &self.form
    }

    /// `L` as an explicit sparse matrix.
    pub fn matrix(&self) -> CsrMatrix {
        let inv: Vec<f64> = self.weights.iter().map(|w| 1.0 / w).collect();
        let mut m = self.form.clone();
        m.scale_rows(&inv);
        m
    }

    /// `W^{1/2} L W^{-1/2}`, symmetric with the same spectrum as `L`.
    pub fn symmetrized(&self) -> CsrMatrix {
        let s: Vec<f64> = self.weights.iter().map(|w| 1.0 / w.sqrt()).collect();
        self.form.scaled(&s, &s)
    }

    pub fn apply_into(&self, f: &[f64], out: &mut [f64]) {
        self.form.mul_vec_into(f, out);
        out.iter_mut().zip(&self.weights).for_each(|(o, w)| *o /= w);
    }

    pub fn apply(&self, f: &Cochain) -> Result<Cochain> {
        self.check(f)?;
        let mut out = vec![0.0; self.dim()];
        self.apply_into(f.values(), &mut out);
        Ok(Cochain::new(self.q, out))
    }

    /// `⟨f, L f⟩_K`.
    pub fn energy(&self, f: &[f64]) -> f64 {
        self.form.quadratic_form(f)
    }

    pub(crate) fn check(&self, f: &Cochain) -> Result<()> {
        if f.q() != self.q {
            return Err(Error::DimensionMismatch {
                context: "cochain dimension vs Laplacian",
                expected: self.q,
                found: f.q(),
            });
        }
        if f.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "cochain length vs Laplacian",
                expected: self.dim(),
                found: f.len(),
            });
        }
        Ok(())
    }
}

fn check_request(k: &SimplicialComplex, q: usize, parts: LaplacianParts) -> Result<()> {
    if k.count(q) == 0 {
        return Err(Error::NoSimplicesAtDimension { q });
    }
    if parts == LaplacianParts::Down && q == 0 {
        return Err(Error::invalid("the down Laplacian needs q >= 1"));
    }
    k.weights(q).map(|_| ())
}

pub fn assemble_laplacian(
    k: &SimplicialComplex,
    q: usize,
    parts: LaplacianParts,
) -> Result<LaplacianOperator> {
    check_request(k, q, parts)?;
    let n = k.count(q);
    let w_q = k.weights(q)?;
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();

    if parts.up() && k.count(q + 1) > 0 {
        let b = assemble_boundary(k, q + 1)?;
        let w_up = k.weights(q + 1)?;
        triplets.reserve(b.ncols() * (q + 2) * (q + 2));
        for (j, &ws) in w_up.iter().enumerate() {
            for (a, sa) in b.column(j) {
                for (c, sc) in b.column(j) {
                    triplets.push((a, c, ws * (sa * sc) as f64));
                }
            }
        }
    }

    if parts.down() && q >= 1 {
        let b = assemble_boundary(k, q)?;
        let w_down = k.weights(q - 1)?;
        for (rho, cofaces) in b.rows_view().into_iter().enumerate() {
            let inv = 1.0 / w_down[rho];
            for &(a, sa) in &cofaces {
                for &(c, sc) in &cofaces {
                    triplets.push((a, c, w_q[a] * w_q[c] * inv * (sa * sc) as f64));
                }
            }
        }
    }

    Ok(LaplacianOperator {
        q,
        parts,
        weights: w_q.to_vec(),
        form: CsrMatrix::from_triplets(n, n, triplets),
    })
}

/// Evaluates `L f` simplex by simplex from the incidence sums: for each
/// `τ ∈ S_q`, the up part runs over cofaces `σ ⊃ τ` and their other faces,
/// the down part over faces `ρ ⊂ τ` and the other simplices sharing `ρ`.
pub fn apply_laplacian_direct(
    k: &SimplicialComplex,
    q: usize,
    f: &Cochain,
    parts: LaplacianParts,
) -> Result<Cochain> {
    check_request(k, q, parts)?;
    if f.q() != q {
        return Err(Error::DimensionMismatch {
            context: "cochain dimension",
            expected: q,
            found: f.q(),
        });
    }
    f.check_on(k)?;
    let fv = f.values();
    let w_q = k.weights(q)?;
    let simplices = k.simplices(q);
    let mut out = vec![0.0; simplices.len()];

    if parts.up() && k.count(q + 1) > 0 {
        let w_up = k.weights(q + 1)?;
        let upper = k.simplices(q + 1);
        for (t, cofaces) in k.cofaces(q).into_iter().enumerate() {
            let mut acc = 0.0;
            for s in cofaces {
                let ratio = w_up[s] / w_q[t];
                let faces = boundary_faces(&upper[s]);
                let sign_t = faces
                    .iter()
                    .find(|(face, _)| *face == simplices[t])
                    .map(|(_, sign)| *sign as f64)
                    .expect("coface contains the simplex");
                acc += ratio * fv[t];
                for (face, sign) in &faces {
                    let other = k.index_of(face).expect("complex is closed");
                    if other != t {
                        acc += ratio * sign_t * (*sign as f64) * fv[other];
                    }
                }
            }
            out[t] += acc;
        }
    }

    if parts.down() && q >= 1 {
        let w_down = k.weights(q - 1)?;
        let cofaces_of_faces = k.cofaces(q - 1);
        for (t, tau) in simplices.iter().enumerate() {
            let mut acc = 0.0;
            for (rho, sign_t) in boundary_faces(tau) {
                let r = k.index_of(&rho).expect("complex is closed");
                acc += w_q[t] / w_down[r] * fv[t];
                for &other in &cofaces_of_faces[r] {
                    if other == t {
                        continue;
                    }
                    let sign_o = boundary_faces(&simplices[other])
                        .into_iter()
                        .find(|(face, _)| *face == rho)
                        .map(|(_, sign)| sign as f64)
                        .expect("coface contains the face");
                    acc += w_q[other] / w_down[r] * (sign_t as f64) * sign_o * fv[other];
                }
            }
            out[t] += acc;
        }
    }

    Ok(Cochain::new(q, out))
}
