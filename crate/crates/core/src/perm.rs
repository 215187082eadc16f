//! Permutations in one-line notation, acting on the right: `(x)(p*q) = ((x)p)q`.
//!
//! Images are 1-indexed at the API boundary (`from_one_line`, `one_line`,
//! `Display`) to match the usual convention for tree pair diagrams; storage is
//! 0-indexed.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    /// images[i] is the 0-indexed image of point i.
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    /// Build from 1-indexed one-line notation: `[3, 4, 1, 2]` sends 1 to 3.
    pub fn from_one_line(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &im in &images {
            if im == 0 || im > n {
                return Err(Error::BadPermutation(format!(
                    "image {im} out of range 1..={n}"
                )));
            }
            if seen[im - 1] {
                return Err(Error::BadPermutation(format!("image {im} repeated")));
            }
            seen[im - 1] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x - 1).collect(),
        })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = vec![false; images.len()];
            images.iter().all(|&i| {
                let fresh = !s[i];
                s[i] = true;
                fresh
            })
        });
        Permutation { images }
    }

    /// One-line notation with 1-indexed images.
    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x + 1).collect()
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// 0-indexed image of a 0-indexed point.
    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i == im)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            inv[im] = i;
        }
        Permutation { images: inv }
    }

    /// Right-action composition: apply `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    /// Is this the cyclic shift i -> i + c (mod n) for some c?
    pub fn cyclic_shift(&self) -> Option<usize> {
        let n = self.degree();
        if n == 0 {
            return Some(0);
        }
        let c = self.images[0];
        for i in 0..n {
            if self.images[i] != (i + c) % n {
                return None;
            }
        }
        Some(c)
    }

    /// The identity-or-rotation shift used when classifying elements of T.
    pub fn is_cyclic(&self) -> bool {
        self.cyclic_shift().is_some()
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, im) in self.one_line().iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{im}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_line_round_trip() {
        let p = Permutation::from_one_line(vec![3, 4, 1, 2]).unwrap();
        assert_eq!(p.one_line(), vec![3, 4, 1, 2]);
        assert_eq!(p.to_string(), "[3 4 1 2]");
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_one_line(vec![1, 1]).is_err());
        assert!(Permutation::from_one_line(vec![0, 2]).is_err());
        assert!(Permutation::from_one_line(vec![3, 1]).is_err());
    }

    #[test]
    fn right_action_composition() {
        // (x)(pq) = ((x)p)q
        let p = Permutation::from_one_line(vec![2, 1, 3]).unwrap();
        let q = Permutation::from_one_line(vec![1, 3, 2]).unwrap();
        let pq = p.compose(&q);
        for x in 0..3 {
            assert_eq!(pq.image(x), q.image(p.image(x)));
        }
    }

    #[test]
    fn inverse_composes_to_identity() {
        let p = Permutation::from_one_line(vec![4, 2, 1, 3]).unwrap();
        assert!(p.compose(&p.inverse()).is_identity());
        assert!(p.inverse().compose(&p).is_identity());
    }

    #[test]
    fn cyclic_shift_detection() {
        assert_eq!(
            Permutation::from_one_line(vec![3, 4, 1, 2])
                .unwrap()
                .cyclic_shift(),
            Some(2)
        );
        assert_eq!(
            Permutation::identity(5).cyclic_shift(),
            Some(0)
        );
        assert_eq!(
            Permutation::from_one_line(vec![3, 2, 1]).unwrap().cyclic_shift(),
            None
        );
    }
}
