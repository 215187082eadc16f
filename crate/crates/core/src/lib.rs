//! Exact computation in Thompson's groups T and V and their relatives.
//!
//! The crate is organized around tree pair diagrams ([`TreePair`]): exact
//! algebra (composition, reduction, classification into F/T/V, subtree
//! shifts), the strand-diagram algorithm deciding torsion and computing
//! orders ([`strand`]), the two-color variant computing rotation numbers of
//! circle elements ([`rotation`]), permutation statistics behind word-length
//! bounds ([`metric`]), the explicit element families with extreme torsion
//! ([`families`]), Houghton's group H₂ and Landau's function ([`houghton`]),
//! and a small formal-language toolkit that bounds element orders from
//! context-free grammars ([`lang`]).

pub mod element;
pub mod error;
pub mod perm;
pub mod tree;

pub use element::{GroupClass, TreePair};
pub use error::{Error, Result};
pub use perm::Permutation;
pub use tree::{BinaryTree, LeafAddress};
