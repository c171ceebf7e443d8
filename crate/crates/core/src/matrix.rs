//! Dense matrices of expressions.

use std::fmt;

use crate::error::{Error, Result};
use crate::symbolic::{Expr, Names};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Expr>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Expr::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Expr::one());
        }
        m
    }

    pub fn diagonal(entries: Vec<Expr>) -> Self {
        let n = entries.len();
        let mut m = Self::zero(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.set(i, i, e);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Expr>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Expr) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Expr] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Expr] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Expr::is_zero)
    }

    pub fn map(&self, mut f: impl FnMut(&Expr) -> Result<Expr>) -> Result<Matrix> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(&mut f).collect::<Result<_>>()?,
        })
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Expr::neg).collect(),
        }
    }

    pub fn scale(&self, s: &Expr) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul(s)).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Expr::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Expr]) -> Result<Vec<Expr>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a.mul(b))
                    .sum()
            })
            .collect())
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Matrix) -> Result<Matrix> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    fn minor(&self, row: usize, col: usize) -> Matrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|&i| i != row) {
            for j in (0..self.cols).filter(|&j| j != col) {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.rows - 1,
            cols: self.cols - 1,
            data,
        }
    }

    /// Determinant by cofactor expansion (the sizes here are tiny).
    pub fn det(&self) -> Result<Expr> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of non-square matrix".into()));
        }
        Ok(match self.rows {
            0 => Expr::one(),
            1 => self.get(0, 0).clone(),
            2 => self
                .get(0, 0)
                .mul(self.get(1, 1))
                .sub(&self.get(0, 1).mul(self.get(1, 0))),
            n => {
                let mut acc = Expr::zero();
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let term = a.mul(&self.minor(0, j).det()?);
                    acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
                }
                acc
            }
        })
    }

    /// Exact inverse via the adjugate.
    pub fn inverse(&self) -> Result<Matrix> {
        let det = self.det()?;
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let n = self.rows;
        if n == 1 {
            return Ok(Matrix::diagonal(vec![det.recip()?]));
        }
        let inv_det = det.recip()?;
        let mut out = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(j, i).det()?;
                let c = if (i + j) % 2 == 0 { c } else { c.neg() };
                out.set(i, j, c.mul(&inv_det));
            }
        }
        Ok(out)
    }

    pub fn render(&self, names: &Names) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|e| names.print(e)).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&Names::generic()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unipotent_inverse() {
        let x = Expr::indep(0);
        let m = Matrix::from_rows(vec![
            vec![Expr::one(), x.clone()],
            vec![Expr::zero(), Expr::one()],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(*inv.get(0, 1), x.neg());
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn three_by_three_inverse() {
        let x = Expr::indep(0);
        let m = Matrix::from_rows(vec![
            vec![Expr::one(), x.clone(), Expr::int(2)],
            vec![Expr::zero(), Expr::one(), x.clone()],
            vec![x.clone(), Expr::zero(), Expr::one()],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn singular_detected() {
        let m = Matrix::from_rows(vec![
            vec![Expr::one(), Expr::int(2)],
            vec![Expr::int(2), Expr::int(4)],
        ])
        .unwrap();
        assert_eq!(m.inverse(), Err(Error::SingularMatrix));
    }
}
