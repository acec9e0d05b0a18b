//! Reference linear algebra for cross-checking the sparse path: dense
//! Gauss–Jordan elimination, first nonzero pivot in column order, no
//! reordering or component tricks. Deliberately plain so that agreement
//! with the sparse eliminator is meaningful.

use lichten::scalar::Scalar;
use lichten::sparse::SparseMat;

pub struct Dense {
    rows: usize,
    cols: usize,
    data: Vec<Vec<Scalar>>,
}

impl Dense {
    pub fn from_sparse(m: &SparseMat) -> Dense {
        let mut data = vec![vec![Scalar::zero(); m.cols()]; m.rows()];
        for j in 0..m.cols() {
            for (i, v) in m.column(j) {
                data[*i][j] = v.clone();
            }
        }
        Dense { rows: m.rows(), cols: m.cols(), data }
    }

    pub fn rank(mut self) -> usize {
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !self.data[r][col].is_zero()) else {
                continue;
            };
            self.data.swap(rank, p);
            let inv = self.data[rank][col].inv().expect("pivot is nonzero");
            for c in col..self.cols {
                self.data[rank][c] = &self.data[rank][c] * &inv;
            }
            for r in (rank + 1)..self.rows {
                if !self.data[r][col].is_zero() {
                    let factor = std::mem::replace(&mut self.data[r][col], Scalar::zero());
                    for c in (col + 1)..self.cols {
                        let sub = &self.data[rank][c] * &factor;
                        self.data[r][c] = &self.data[r][c] - &sub;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }

    pub fn kernel_dim(self) -> usize {
        let cols = self.cols;
        cols - self.rank()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lichten::sparse::SparseVec;

    fn mat(rows: usize, cols: Vec<SparseVec>) -> SparseMat {
        SparseMat::from_columns(rows, cols)
    }

    #[test]
    fn hand_checked_ranks() {
        // [[1, 2], [2, 4]] has rank 1
        let m = mat(
            2,
            vec![
                vec![(0, Scalar::from_int(1)), (1, Scalar::from_int(2))],
                vec![(0, Scalar::from_int(2)), (1, Scalar::from_int(4))],
            ],
        );
        assert_eq!(Dense::from_sparse(&m).rank(), 1);
        assert_eq!(Dense::from_sparse(&m).kernel_dim(), 1);

        // [[0, i], [1, 0]] has rank 2
        let m = mat(
            2,
            vec![vec![(1, Scalar::from_int(1))], vec![(0, Scalar::i())]],
        );
        assert_eq!(Dense::from_sparse(&m).rank(), 2);

        let zero = SparseMat::zero(3, 2);
        assert_eq!(Dense::from_sparse(&zero).rank(), 0);
        assert_eq!(Dense::from_sparse(&zero).kernel_dim(), 2);
    }
}
