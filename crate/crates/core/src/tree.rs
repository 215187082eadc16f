//! Finite rooted binary trees (every internal vertex has exactly two
//! children), the domain/range halves of a tree pair diagram.
//!
//! The shape is stored as a preorder sequence over `{1 = caret, 0 = leaf}`.
//! Trees produced by power iteration get comb-like and thousands of levels
//! deep, so every operation here is a loop over that sequence rather than a
//! recursive walk.

use std::fmt;

use crate::error::{Error, Result};

/// Address of a leaf: the left/right (0/1) path from the root.
pub type LeafAddress = Vec<u8>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryTree {
    /// Preorder shape string, 1 = caret, 0 = leaf.
    shape: Vec<u8>,
}

impl BinaryTree {
    pub fn leaf() -> Self {
        BinaryTree { shape: vec![0] }
    }

    pub fn caret() -> Self {
        BinaryTree {
            shape: vec![1, 0, 0],
        }
    }

    /// Join two trees under a new root (the paper's wedge `∧`).
    pub fn concat(left: &BinaryTree, right: &BinaryTree) -> Self {
        let mut shape = Vec::with_capacity(1 + left.shape.len() + right.shape.len());
        shape.push(1);
        shape.extend_from_slice(&left.shape);
        shape.extend_from_slice(&right.shape);
        BinaryTree { shape }
    }

    /// Right comb with `n` leaves: every caret hangs off the right strand.
    pub fn comb_right(n: usize) -> Self {
        assert!(n >= 1);
        let mut shape = Vec::with_capacity(2 * n - 1);
        for _ in 1..n {
            shape.push(1);
            shape.push(0);
        }
        shape.push(0);
        BinaryTree { shape }
    }

    /// Left comb with `n` leaves.
    pub fn comb_left(n: usize) -> Self {
        assert!(n >= 1);
        let mut shape = Vec::with_capacity(2 * n - 1);
        shape.extend(std::iter::repeat(1).take(n - 1));
        shape.extend(std::iter::repeat(0).take(n));
        BinaryTree { shape }
    }

    /// Tree with `n` leaves and depth exactly `ceil(log2 n)`.
    pub fn balanced(n: usize) -> Self {
        assert!(n >= 1);
        let mut shape = Vec::with_capacity(2 * n - 1);
        let mut stack = vec![n];
        while let Some(k) = stack.pop() {
            if k == 1 {
                shape.push(0);
            } else {
                shape.push(1);
                let left = k.div_ceil(2);
                stack.push(k - left);
                stack.push(left);
            }
        }
        BinaryTree { shape }
    }

    pub fn is_leaf(&self) -> bool {
        self.shape.len() == 1
    }

    pub fn leaves(&self) -> usize {
        self.shape.iter().filter(|&&s| s == 0).count()
    }

    pub fn carets(&self) -> usize {
        self.shape.len() - self.leaves()
    }

    pub(crate) fn shape(&self) -> &[u8] {
        &self.shape
    }

    pub(crate) fn from_shape(shape: Vec<u8>) -> Self {
        debug_assert!(Self::check_shape(&shape));
        BinaryTree { shape }
    }

    fn check_shape(shape: &[u8]) -> bool {
        let mut need = 1i64;
        for &s in shape {
            if need <= 0 {
                return false;
            }
            need -= 1;
            if s == 1 {
                need += 2;
            }
        }
        need == 0
    }

    /// End (exclusive) of the subtree whose root sits at preorder index `start`.
    pub(crate) fn subtree_end(&self, start: usize) -> usize {
        let mut need = 1usize;
        let mut i = start;
        while need > 0 {
            need -= 1;
            if self.shape[i] == 1 {
                need += 2;
            }
            i += 1;
        }
        i
    }

    /// Maximum leaf depth, counted in edges.
    pub fn depth(&self) -> usize {
        let mut max = 0usize;
        // stack entries: children still owed at each open caret
        let mut stack: Vec<u8> = Vec::new();
        for &s in &self.shape {
            if s == 1 {
                stack.push(2);
            } else {
                max = max.max(stack.len());
                while let Some(top) = stack.last_mut() {
                    *top -= 1;
                    if *top == 0 {
                        stack.pop();
                    } else {
                        break;
                    }
                }
            }
        }
        max
    }

    /// Depth of every leaf, in leaf order.
    pub fn leaf_depths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.leaves());
        let mut stack: Vec<u8> = Vec::new();
        for &s in &self.shape {
            if s == 1 {
                stack.push(2);
            } else {
                out.push(stack.len());
                while let Some(top) = stack.last_mut() {
                    *top -= 1;
                    if *top == 0 {
                        stack.pop();
                    } else {
                        break;
                    }
                }
            }
        }
        out
    }

    /// Addresses of all leaves, left to right.
    pub fn leaf_addresses(&self) -> Vec<LeafAddress> {
        let mut out = Vec::with_capacity(self.leaves());
        let mut path: Vec<u8> = Vec::new();
        // parallel stack of children owed; path records the branch taken
        let mut stack: Vec<u8> = Vec::new();
        for &s in &self.shape {
            if s == 1 {
                stack.push(2);
                path.push(0);
            } else {
                out.push(path.clone());
                while let Some(top) = stack.last_mut() {
                    *top -= 1;
                    if *top == 0 {
                        stack.pop();
                        path.pop();
                    } else {
                        *path.last_mut().unwrap() = 1;
                        break;
                    }
                }
            }
        }
        out
    }

    /// Walk `bits` from the root. Returns `Ok((leaf_index, consumed))` when a
    /// leaf is reached; `Err(PrefixTooShort)` when bits run out first.
    pub fn walk(&self, bits: &[u8]) -> Result<(usize, usize)> {
        let mut pos = 0usize; // preorder index
        let mut leaf_index = 0usize; // leaves strictly to the left of pos
        let mut consumed = 0usize;
        while self.shape[pos] == 1 {
            let Some(&bit) = bits.get(consumed) else {
                return Err(Error::PrefixTooShort { consumed });
            };
            consumed += 1;
            if bit == 0 {
                pos += 1;
            } else {
                let left_start = pos + 1;
                let left_end = self.subtree_end(left_start);
                leaf_index += count_leaves(&self.shape[left_start..left_end]);
                pos = left_end;
            }
        }
        Ok((leaf_index, consumed))
    }

    /// Address of the `i`-th leaf (0-indexed).
    pub fn leaf_address(&self, i: usize) -> LeafAddress {
        let mut pos = 0usize;
        let mut skip = i;
        let mut path = Vec::new();
        while self.shape[pos] == 1 {
            let left_start = pos + 1;
            let left_end = self.subtree_end(left_start);
            let left_leaves = count_leaves(&self.shape[left_start..left_end]);
            if skip < left_leaves {
                path.push(0);
                pos = left_start;
            } else {
                skip -= left_leaves;
                path.push(1);
                pos = left_end;
            }
        }
        path
    }

    /// Smallest common refinement of two trees (preorder lockstep union).
    pub fn refine(a: &BinaryTree, b: &BinaryTree) -> BinaryTree {
        let (sa, sb) = (&a.shape, &b.shape);
        let mut out = Vec::with_capacity(sa.len().max(sb.len()));
        let (mut ia, mut ib) = (0usize, 0usize);
        while ia < sa.len() {
            match (sa[ia], sb[ib]) {
                (0, 0) => {
                    out.push(0);
                    ia += 1;
                    ib += 1;
                }
                (1, 1) => {
                    out.push(1);
                    ia += 1;
                    ib += 1;
                }
                (1, 0) => {
                    let end = a.subtree_end(ia);
                    out.extend_from_slice(&sa[ia..end]);
                    ia = end;
                    ib += 1;
                }
                (0, 1) => {
                    let end = b.subtree_end(ib);
                    out.extend_from_slice(&sb[ib..end]);
                    ib = end;
                    ia += 1;
                }
                _ => unreachable!(),
            }
        }
        debug_assert_eq!(ib, sb.len());
        BinaryTree { shape: out }
    }

    /// Cut `self` along the coarser tree `crown`: returns, for each leaf of
    /// `crown`, the subtree of `self` hanging there. `crown` must be a
    /// prefix of `self` (guaranteed when `self` came from `refine`).
    pub fn cut_along(&self, crown: &BinaryTree) -> Vec<BinaryTree> {
        let mut parts = Vec::with_capacity(crown.leaves());
        let (mut i, mut ic) = (0usize, 0usize);
        while ic < crown.shape.len() {
            match (crown.shape[ic], self.shape[i]) {
                (1, 1) => {
                    i += 1;
                    ic += 1;
                }
                (0, _) => {
                    let end = self.subtree_end(i);
                    parts.push(BinaryTree {
                        shape: self.shape[i..end].to_vec(),
                    });
                    i = end;
                    ic += 1;
                }
                (1, 0) => panic!("cut_along: crown is not a prefix of the tree"),
                _ => unreachable!(),
            }
        }
        debug_assert_eq!(i, self.shape.len());
        parts
    }

    /// Replace the `i`-th leaf with `parts[i]`.
    pub fn graft(&self, parts: &[BinaryTree]) -> BinaryTree {
        assert_eq!(parts.len(), self.leaves());
        let mut out = Vec::with_capacity(self.shape.len());
        let mut k = 0usize;
        for &s in &self.shape {
            if s == 1 {
                out.push(1);
            } else {
                out.extend_from_slice(&parts[k].shape);
                k += 1;
            }
        }
        BinaryTree { shape: out }
    }

    /// Tree with a single path along `prefix`, `inner` grafted at its end and
    /// leaves everywhere else. Returns the tree and the leaf index where
    /// `inner`'s first leaf lands.
    pub fn spine(prefix: &[u8], inner: &BinaryTree) -> (BinaryTree, usize) {
        let mut shape = Vec::with_capacity(2 * prefix.len() + inner.shape.len());
        let mut trailing = 0usize; // leaves to emit after the inner block
        let mut leaf_offset = 0usize;
        for &bit in prefix {
            shape.push(1);
            if bit == 0 {
                trailing += 1;
            } else {
                shape.push(0);
                leaf_offset += 1;
            }
        }
        shape.extend_from_slice(&inner.shape);
        shape.extend(std::iter::repeat(0).take(trailing));
        (BinaryTree { shape }, leaf_offset)
    }

    /// Parse the text form `TREE ::= "*" | "(" TREE TREE ")"`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut shape = Vec::new();
        let mut need = 1i64;
        let mut closers: Vec<i64> = Vec::new();
        for ch in text.chars() {
            if ch.is_whitespace() {
                continue;
            }
            if need == 0 && closers.is_empty() {
                return Err(Error::Parse(format!("unexpected {ch:?} after a complete tree")));
            }
            match ch {
                '*' => {
                    if need == 0 {
                        return Err(Error::Parse("unexpected leaf".into()));
                    }
                    shape.push(0);
                    need -= 1;
                }
                '(' => {
                    if need == 0 {
                        return Err(Error::Parse("unexpected '('".into()));
                    }
                    shape.push(1);
                    need -= 1;
                    closers.push(need);
                    need = 2;
                }
                ')' => {
                    if need != 0 {
                        return Err(Error::Parse("')' before both children were given".into()));
                    }
                    need = closers
                        .pop()
                        .ok_or_else(|| Error::Parse("unbalanced ')'".into()))?;
                }
                _ => return Err(Error::Parse(format!("unexpected character {ch:?} in tree"))),
            }
        }
        if need != 0 || !closers.is_empty() {
            return Err(Error::Parse("incomplete tree".into()));
        }
        Ok(BinaryTree { shape })
    }
}

impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // iterative preorder printer
        let mut stack: Vec<u8> = Vec::new();
        for &s in &self.shape {
            if s == 1 {
                write!(f, "(")?;
                stack.push(2);
            } else {
                write!(f, "*")?;
                while let Some(top) = stack.last_mut() {
                    *top -= 1;
                    if *top == 0 {
                        stack.pop();
                        write!(f, ")")?;
                    } else {
                        break;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn count_leaves(shape: &[u8]) -> usize {
    shape.iter().filter(|&&s| s == 0).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders() {
        assert_eq!(BinaryTree::comb_right(2), BinaryTree::comb_left(2));
        assert_eq!(BinaryTree::comb_right(5).depth(), 4);
        assert_eq!(BinaryTree::comb_left(5).depth(), 4);
        assert_eq!(
            BinaryTree::concat(&BinaryTree::comb_right(2), &BinaryTree::comb_right(3)).leaves(),
            5
        );
        for n in 1..40 {
            let t = BinaryTree::balanced(n);
            assert_eq!(t.leaves(), n);
            assert_eq!(t.depth(), (n as f64).log2().ceil() as usize);
        }
    }

    #[test]
    fn display_and_parse_round_trip() {
        let texts = ["*", "(**)", "(*(**))", "((**)*)", "((**)((**)*))"];
        for t in texts {
            let tree = BinaryTree::parse(t).unwrap();
            assert_eq!(tree.to_string(), t);
        }
        assert!(BinaryTree::parse("(*)").is_err());
        assert!(BinaryTree::parse("(***)").is_err());
        assert!(BinaryTree::parse("**").is_err());
        assert!(BinaryTree::parse("").is_err());
    }

    #[test]
    fn addresses() {
        let t = BinaryTree::parse("(*((**)*))").unwrap();
        let addrs = t.leaf_addresses();
        assert_eq!(
            addrs,
            vec![vec![0], vec![1, 0, 0], vec![1, 0, 1], vec![1, 1]]
        );
        for (i, a) in addrs.iter().enumerate() {
            assert_eq!(&t.leaf_address(i), a);
            assert_eq!(t.walk(a).unwrap(), (i, a.len()));
        }
        assert!(matches!(
            t.walk(&[1]),
            Err(Error::PrefixTooShort { consumed: 1 })
        ));
    }

    #[test]
    fn refine_and_cut() {
        let a = BinaryTree::parse("(*(**))").unwrap();
        let b = BinaryTree::parse("((**)*)").unwrap();
        let c = BinaryTree::refine(&a, &b);
        assert_eq!(c.to_string(), "((**)(**))");
        let parts = c.cut_along(&a);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0].to_string(), "(**)");
        assert_eq!(parts[1].to_string(), "*");
        let grafted = a.graft(&parts);
        assert_eq!(grafted, c);
    }

    #[test]
    fn spine_grafts_below_prefix() {
        let inner = BinaryTree::caret();
        let (t, off) = BinaryTree::spine(&[1, 0], &inner);
        assert_eq!(t.to_string(), "(*((**)*))");
        assert_eq!(off, 1);
        assert_eq!(t.leaves(), 4);
    }
}
