use num_traits::One;

use super::{AlgebraError, Poly, Rat};

/// Dense matrix of polynomials sharing one ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMat {
    rows: usize,
    cols: usize,
    dim: usize,
    entries: Vec<Poly>,
}

impl PolyMat {
    /// `entries` are row-major.
    pub fn new(rows: usize, cols: usize, entries: Vec<Poly>) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let dim = match entries.first() {
            Some(p) => p.dim(),
            None => 0,
        };
        if let Some(bad) = entries.iter().find(|p| p.dim() != dim) {
            return Err(AlgebraError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(PolyMat {
            rows,
            cols,
            dim,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Poly>>) -> Result<Self, AlgebraError> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(AlgebraError::Shape("ragged rows".into()));
        }
        PolyMat::new(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Poly] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// New matrix with `row` placed above the existing rows.
    pub fn with_row_prepended(&self, row: Vec<Poly>) -> Result<PolyMat, AlgebraError> {
        if row.len() != self.cols {
            return Err(AlgebraError::Shape(format!(
                "row of length {} for {} columns",
                row.len(),
                self.cols
            )));
        }
        let mut entries = row;
        entries.extend(self.entries.iter().cloned());
        PolyMat::new(self.rows + 1, self.cols, entries)
    }

    pub fn swap_rows(&self, a: usize, b: usize) -> PolyMat {
        let mut out = self.clone();
        for j in 0..self.cols {
            out.entries.swap(a * self.cols + j, b * self.cols + j);
        }
        out
    }

    pub fn checked_mul(&self, other: &PolyMat) -> Result<PolyMat, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Poly::zero(self.dim);
                for k in 0..self.cols {
                    acc = acc.checked_add(&self.get(i, k).checked_mul(other.get(k, j))?)?;
                }
                entries.push(acc);
            }
        }
        PolyMat::new(self.rows, other.cols, entries)
    }

    /// Entrywise substitution of polynomials for the variables.
    pub fn substitute(&self, args: &[Poly]) -> Result<PolyMat, AlgebraError> {
        let entries = self
            .entries
            .iter()
            .map(|p| p.substitute(args))
            .collect::<Result<Vec<_>, _>>()?;
        PolyMat::new(self.rows, self.cols, entries)
    }

    fn det_of(&self, rows: &[usize], cols: &[usize]) -> Result<Poly, AlgebraError> {
        match rows.len() {
            0 => Ok(Poly::constant(self.dim, Rat::one())),
            1 => Ok(self.get(rows[0], cols[0]).clone()),
            2 => {
                let a = self.get(rows[0], cols[0]).checked_mul(self.get(rows[1], cols[1]))?;
                let b = self.get(rows[0], cols[1]).checked_mul(self.get(rows[1], cols[0]))?;
                a.checked_sub(&b)
            }
            _ => {
                // Laplace expansion along the first selected row.
                let mut acc = Poly::zero(self.dim);
                let sub_rows = &rows[1..];
                for (k, &c) in cols.iter().enumerate() {
                    let entry = self.get(rows[0], c);
                    if entry.is_zero() {
                        continue;
                    }
                    let sub_cols: Vec<usize> =
                        cols.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &c)| c).collect();
                    let term = entry.checked_mul(&self.det_of(sub_rows, &sub_cols)?)?;
                    acc = if k % 2 == 0 {
                        acc.checked_add(&term)?
                    } else {
                        acc.checked_sub(&term)?
                    };
                }
                Ok(acc)
            }
        }
    }

    pub fn det(&self) -> Result<Poly, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::Shape(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        self.det_of(&idx, &idx)
    }

    /// All k×k minors, enumerated over row subsets then column subsets in
    /// lexicographic order. Empty when `k` exceeds either dimension.
    pub fn minors(&self, k: usize) -> Result<Vec<Poly>, AlgebraError> {
        if k == 0 || k > self.rows || k > self.cols {
            return Ok(Vec::new());
        }
        let row_sets = combinations(self.rows, k);
        let col_sets = combinations(self.cols, k);
        let mut out = Vec::with_capacity(row_sets.len() * col_sets.len());
        for rs in &row_sets {
            for cs in &col_sets {
                out.push(self.det_of(rs, cs)?);
            }
        }
        Ok(out)
    }

    /// Row and column index sets matching the order of [`PolyMat::minors`].
    pub fn minor_index_sets(&self, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
        if k == 0 || k > self.rows || k > self.cols {
            return Vec::new();
        }
        let col_sets = combinations(self.cols, k);
        combinations(self.rows, k)
            .into_iter()
            .flat_map(|rs| col_sets.iter().map(move |cs| (rs.clone(), cs.clone())))
            .collect()
    }
}

/// k-subsets of 0..n in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // rightmost position that can still advance
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn r(n: i64) -> Rat {
        Rat::from_integer(BigInt::from(n))
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn single_two_by_two_minor() {
        let x = Poly::var(2, 0).unwrap();
        let y = Poly::var(2, 1).unwrap();
        let m = PolyMat::from_rows(vec![
            vec![Poly::from_int(2, 1), Poly::zero(2)],
            vec![y, x.clone()],
        ])
        .unwrap();
        assert_eq!(m.minors(2).unwrap(), vec![x]);
        assert!(m.minors(3).unwrap().is_empty());
    }

    #[test]
    fn three_by_three_minor_of_augmented_sabbah_jacobian() {
        let x = Poly::var(3, 0).unwrap();
        let y = Poly::var(3, 1).unwrap();
        let z = Poly::var(3, 2).unwrap();
        let m = PolyMat::from_rows(vec![
            vec![x.clone(), y.clone(), z.clone()],
            vec![x.scale(&r(2)), (&y * &z).scale(&r(-2)), (&y * &y).neg()],
            vec![Poly::zero(3), Poly::from_int(3, 1), Poly::zero(3)],
        ])
        .unwrap();
        let expected = &(&x * &(&y * &y)) + &(&x * &z).scale(&r(2));
        assert_eq!(m.minors(3).unwrap(), vec![expected]);
    }

    #[test]
    fn repeated_rows_give_zero_minors() {
        let x = Poly::var(2, 0).unwrap();
        let y = Poly::var(2, 1).unwrap();
        let row = vec![&x * &y, x.clone(), y.clone()];
        let m = PolyMat::from_rows(vec![row.clone(), row, vec![x.clone(), y.clone(), Poly::from_int(2, 3)]])
            .unwrap();
        for ((rs, _), minor) in m.minor_index_sets(2).iter().zip(m.minors(2).unwrap()) {
            if rs == &vec![0, 1] {
                assert!(minor.is_zero());
            }
        }
    }

    #[test]
    fn shape_errors() {
        assert!(PolyMat::new(2, 2, vec![Poly::zero(1)]).is_err());
        let a = PolyMat::new(1, 2, vec![Poly::zero(1), Poly::zero(1)]).unwrap();
        assert!(a.checked_mul(&a).is_err());
        assert!(a.det().is_err());
    }
}
