use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A permutation of `{0, .., n-1}` stored by its image: index `i` is sent
/// to `image[i]`.
///
/// Acting on the left of a matrix (`P * X`) it moves row `i` to row
/// `image[i]`; acting on the right (`X * Q`) it moves column `j` to column
/// `image[j]`. The transpose acts through the inverse image.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// The unit anti-diagonal `J_n`.
    pub fn reversal(n: usize) -> Self {
        Permutation {
            image: (0..n).rev().collect(),
        }
    }

    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = alloc::vec![false; n];
        for &i in &image {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation);
            }
            seen[i] = true;
        }
        Ok(Permutation { image })
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn into_image(self) -> Vec<usize> {
        self.image
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Self {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Permutation {
            image: other.image.iter().map(|&j| self.image[j]).collect(),
        }
    }

    /// Block-diagonal extension `diag(self, I_extra)`.
    pub fn extend(&self, extra: usize) -> Self {
        let n = self.len();
        let mut image = self.image.clone();
        image.extend(n..n + extra);
        Permutation { image }
    }

    /// Moves `v[i]` to position `image[i]`.
    pub fn permute_slice<T: Clone>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.len());
        let mut out = v.to_vec();
        for (i, x) in v.iter().enumerate() {
            out[self.image[i]] = x.clone();
        }
        out
    }

    /// Inverse action: `out[i] = v[image[i]]`.
    pub fn gather_slice<T: Clone>(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.len());
        self.image.iter().map(|&j| v[j].clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_image(alloc::vec![0, 0]).is_err());
        assert!(Permutation::from_image(alloc::vec![0, 2]).is_err());
        assert!(Permutation::from_image(alloc::vec![1, 0]).is_ok());
    }

    #[test]
    fn reversal_is_involution() {
        let j = Permutation::reversal(5);
        assert!(j.compose(&j).is_identity());
        assert_eq!(j.inverse(), j);
    }

    #[test]
    fn compose_and_inverse() {
        let p = Permutation::from_image(alloc::vec![2, 0, 3, 1]).unwrap();
        let q = Permutation::from_image(alloc::vec![1, 3, 0, 2]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        let pq = p.compose(&q);
        for i in 0..4 {
            assert_eq!(pq.apply(i), p.apply(q.apply(i)));
        }
        let v = [10, 11, 12, 13];
        assert_eq!(p.gather_slice(&p.permute_slice(&v)), v.to_vec());
    }
}
