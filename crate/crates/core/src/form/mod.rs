//! Quadratic forms over the computable fields: Gram matrices, diagonal
//! forms, Pfister forms, Witt classes, and trace forms of Galois algebras.

pub mod hilbert;
pub mod matrix;
mod serre;
mod trace;
mod witt;

use serde_json::{json, Value};

use crate::field::{Field, FieldDescriptor, FieldElement, FieldError};
use crate::group::GroupError;

pub use matrix::Matrix;
pub use serre::{random_orthogonal_action, serre_decompose, SerreDecomposition};
pub use trace::{
    corollary22_check, trace_form_from_poly, trace_form_kummer_tower, trace_form_multiquadratic,
    wadsworth_criterion, Cor22Report, ExtensionSpec, KummerTower, Polynomial, WadsworthVerdict,
};
pub use witt::{
    anisotropic_dim, is_hyperbolic, is_isotropic, pfister_isotropic, witt_decompose, witt_equivalent,
    QInvariants, WittClass,
};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("shape: {0}")]
    Shape(String),
    #[error("zero entry in a diagonal form")]
    ZeroEntry,
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("malformed form: {0}")]
    Parse(String),
}

/// Symmetric matrix of a bilinear form.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    pub field: Field,
    pub entries: Matrix,
}

/// Diagonal form `⟨a_1, ..., a_n⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct QForm {
    pub field: Field,
    pub diag: Vec<FieldElement>,
}

/// Which binary factor a Pfister slot contributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PfisterSign {
    /// `⟨1, -a⟩`.
    #[default]
    Minus,
    /// `⟨1, a⟩`, isometric to the other when `-1` is a square.
    Plus,
}

impl GramMatrix {
    pub fn new(field: &Field, entries: Matrix) -> Result<Self, FormError> {
        if !matrix::is_square_shape(&entries) {
            return Err(FormError::Shape("Gram matrix must be square".into()));
        }
        if !matrix::is_symmetric(&entries) {
            return Err(FormError::NotSymmetric);
        }
        for row in &entries {
            for x in row {
                field.validate(x)?;
            }
        }
        Ok(GramMatrix { field: field.clone(), entries })
    }

    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Result<Self, FormError> {
        let m = rows.iter().map(|r| r.iter().map(|&x| field.from_int(x)).collect()).collect();
        GramMatrix::new(field, m)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn det(&self) -> FieldElement {
        matrix::det(&self.field, &self.entries).expect("square by construction")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.field.is_zero(&self.det())
    }

    /// Restriction to the span of the given vectors.
    pub fn restrict(&self, basis: &[Vec<FieldElement>]) -> GramMatrix {
        let f = &self.field;
        let entries = basis
            .iter()
            .map(|x| basis.iter().map(|y| matrix::bilinear(f, &self.entries, x, y)).collect())
            .collect();
        GramMatrix { field: f.clone(), entries }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .entries
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| self.field.to_json(x)).collect()))
            .collect();
        json!({ "field": self.field.descriptor(), "gram": rows })
    }

    pub fn format_rows(&self) -> Vec<String> {
        self.entries
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|x| self.field.format(x)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect()
    }
}

impl QForm {
    pub fn new(field: &Field, diag: Vec<FieldElement>) -> Result<Self, FormError> {
        for x in &diag {
            field.validate(x)?;
            if field.is_zero(x) {
                return Err(FormError::ZeroEntry);
            }
        }
        Ok(QForm { field: field.clone(), diag })
    }

    pub fn from_ints(field: &Field, xs: &[i64]) -> Result<Self, FormError> {
        QForm::new(field, xs.iter().map(|&x| field.from_int(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn gram(&self) -> GramMatrix {
        GramMatrix { field: self.field.clone(), entries: matrix::diag(&self.field, &self.diag) }
    }

    /// Orthogonal sum.
    pub fn perp(&self, other: &QForm) -> QForm {
        assert_eq!(self.field, other.field, "forms over different fields");
        QForm { field: self.field.clone(), diag: self.diag.iter().chain(&other.diag).cloned().collect() }
    }

    pub fn scale(&self, c: &FieldElement) -> QForm {
        QForm { field: self.field.clone(), diag: self.diag.iter().map(|x| self.field.mul(x, c)).collect() }
    }

    pub fn negate(&self) -> QForm {
        self.scale(&self.field.from_int(-1))
    }

    pub fn tensor(&self, other: &QForm) -> QForm {
        let f = &self.field;
        let diag = other.diag.iter().flat_map(|b| self.diag.iter().map(move |a| f.mul(a, b))).collect();
        QForm { field: f.clone(), diag }
    }

    /// `Σ a_i x_i²`.
    pub fn evaluate(&self, x: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let mut acc = f.zero();
        for (a, v) in self.diag.iter().zip(x) {
            acc = f.add(&acc, &f.mul(a, &f.square(v)));
        }
        acc
    }

    pub fn format(&self) -> String {
        let cells: Vec<String> = self.diag.iter().map(|x| self.field.format(x)).collect();
        format!("⟨{}⟩", cells.join(", "))
    }

    pub fn to_json(&self) -> Value {
        let diag: Vec<Value> = self.diag.iter().map(|x| self.field.to_json(x)).collect();
        json!({ "field": self.field.descriptor(), "diag": diag })
    }
}

/// A form read from JSON: either diagonal or a full Gram matrix.
#[derive(Clone, Debug)]
pub enum FormInput {
    Diagonal(QForm),
    Gram(GramMatrix),
}

impl FormInput {
    pub fn from_json(v: &Value) -> Result<Self, FormError> {
        let desc: FieldDescriptor = serde_json::from_value(
            v.get("field").cloned().ok_or_else(|| FormError::Parse("missing \"field\"".into()))?,
        )
        .map_err(|e| FormError::Parse(e.to_string()))?;
        let f = Field::new(&desc)?;
        if let Some(d) = v.get("diag") {
            let xs = d.as_array().ok_or_else(|| FormError::Parse("\"diag\" must be a list".into()))?;
            let diag = xs.iter().map(|x| f.from_json(x)).collect::<Result<Vec<_>, _>>()?;
            return Ok(FormInput::Diagonal(QForm::new(&f, diag)?));
        }
        if let Some(g) = v.get("gram") {
            let rows = g.as_array().ok_or_else(|| FormError::Parse("\"gram\" must be a list".into()))?;
            let mut m = Vec::new();
            for r in rows {
                let r = r.as_array().ok_or_else(|| FormError::Parse("Gram rows must be lists".into()))?;
                m.push(r.iter().map(|x| f.from_json(x)).collect::<Result<Vec<_>, _>>()?);
            }
            return Ok(FormInput::Gram(GramMatrix::new(&f, m)?));
        }
        Err(FormError::Parse("expected \"diag\" or \"gram\"".into()))
    }

    pub fn into_diagonal(self) -> Result<QForm, FormError> {
        match self {
            FormInput::Diagonal(q) => Ok(q),
            FormInput::Gram(g) => Ok(diagonalize(&g)?.0),
        }
    }
}

fn check_characteristic(f: &Field) -> Result<(), FormError> {
    if f.characteristic() == 2 {
        Err(FormError::CharacteristicTwo)
    } else {
        Ok(())
    }
}

/// Congruence diagonalization. Returns the diagonal form and a matrix `P`
/// whose columns are the new basis, so that `Pᵀ g P` is diagonal.
///
/// Over Laurent towers a basis vector is rescaled by the pivot instead of
/// dividing when the quotient is not a Laurent polynomial.
pub fn diagonalize(g: &GramMatrix) -> Result<(QForm, Matrix), FormError> {
    let f = &g.field;
    check_characteristic(f)?;
    let n = g.dim();
    let mut w = g.entries.clone();
    let mut p = matrix::identity(f, n);
    // e_i <- lam e_i + mu e_k on the Gram matrix and on P.
    let combine = |w: &mut Matrix, p: &mut Matrix, i: usize, lam: &FieldElement, k: usize, mu: &FieldElement| {
        for j in 0..n {
            w[i][j] = f.add(&f.mul(lam, &w[i][j]), &f.mul(mu, &w[k][j]));
        }
        for j in 0..n {
            w[j][i] = f.add(&f.mul(lam, &w[j][i]), &f.mul(mu, &w[j][k]));
        }
        for row in p.iter_mut() {
            row[i] = f.add(&f.mul(lam, &row[i]), &f.mul(mu, &row[k]));
        }
    };
    let one = f.one();
    for k in 0..n {
        if f.is_zero(&w[k][k]) {
            if let Some(i) = (k + 1..n).find(|&i| !f.is_zero(&w[i][i])) {
                w.swap(k, i);
                for row in w.iter_mut() {
                    row.swap(k, i);
                }
                for row in p.iter_mut() {
                    row.swap(k, i);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !f.is_zero(&w[k][j])) {
                combine(&mut w, &mut p, k, &one, j, &one);
            } else {
                return Err(FormError::Singular);
            }
        }
        let d = w[k][k].clone();
        assert!(!f.is_zero(&d), "pivot repair must succeed for a nonsingular row");
        for i in k + 1..n {
            let c = w[i][k].clone();
            if f.is_zero(&c) {
                continue;
            }
            match f.div(&c, &d) {
                Ok(q) => combine(&mut w, &mut p, i, &one, k, &f.neg(&q)),
                Err(_) => combine(&mut w, &mut p, i, &d, k, &f.neg(&c)),
            }
        }
    }
    let diag: Vec<FieldElement> = (0..n).map(|i| w[i][i].clone()).collect();
    Ok((QForm { field: f.clone(), diag }, p))
}

/// `⊗ ⟨1, ∓a_i⟩`, entry `i` being the product of the slots in the binary
/// expansion of `i`.
pub fn pfister(f: &Field, slots: &[FieldElement], sign: PfisterSign) -> Result<QForm, FormError> {
    check_characteristic(f)?;
    if sign == PfisterSign::Plus && f.zeta(2).is_none() {
        return Err(FormError::Precondition(format!(
            "the ⟨1, a⟩ convention needs a primitive 4th root of unity in {f}"
        )));
    }
    let mut diag = vec![f.one()];
    for a in slots {
        f.validate(a)?;
        if f.is_zero(a) {
            return Err(FormError::ZeroEntry);
        }
        let b = match sign {
            PfisterSign::Minus => f.neg(a),
            PfisterSign::Plus => a.clone(),
        };
        let upper: Vec<FieldElement> = diag.iter().map(|x| f.mul(x, &b)).collect();
        diag.extend(upper);
    }
    Ok(QForm { field: f.clone(), diag })
}

pub fn scaled_pfister(f: &Field, c: &FieldElement, slots: &[FieldElement], sign: PfisterSign) -> Result<QForm, FormError> {
    if f.is_zero(c) {
        return Err(FormError::ZeroEntry);
    }
    Ok(pfister(f, slots, sign)?.scale(c))
}

#[cfg(test)]
mod tests;
