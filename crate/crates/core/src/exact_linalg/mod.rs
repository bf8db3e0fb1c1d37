//! Exact scalars over Q and Q(i), sparse tensors keyed by generator words,
//! canonical subspaces and the linear solvers built on them.

mod reduce;
mod scalar;
mod subspace;
mod tensor;

pub use reduce::{axpy, Aug, Combiner, RowReducer, SparseRow};
pub use scalar::{Field, Scalar};
pub use subspace::{intersect, solve_affine, Subspace};
pub use tensor::{all_words, tau_apply, tau_permutation, Tensor, Word, UNIT};
