//! Khovanov homology of links from planar diagram codes, with the
//! combinatorial skeleton of framed flow categories.

pub mod complex;
pub mod cube;
pub mod decorated;
pub mod error;
pub mod flow;
pub mod homology;
pub mod kauffman;
pub mod matrix;
pub mod pd;
pub mod poly;
pub mod snf;

pub use complex::{
    d_squared_check, differential, generators, s0_sign, BigradedComplex, ChainComplex, GeneratorKey,
    LabeledGenerator, DEFAULT_CUBE_CAP,
};
pub use cube::{
    core, covers, edge_type, is_basic, labelings, maximal_surgery, resolve, surgery, EdgeType, Label,
    LabeledConfiguration, ResolutionConfiguration, Vertex,
};
pub use decorated::{decorated_configs, interval_boundary, khovanov_skeleton, BoundaryChain, DecoratedConfiguration};
pub use error::{Error, Result};
pub use flow::{
    cube_flow_category, d_squared_from_boundary, face_poset, floer_complex, verify_face_axioms,
    BoundaryReport, FacePoset, FlowCategorySkeleton, DEFAULT_FLOW_CAP,
};
pub use homology::{chain_homology, graded_euler, homology, jones, Group, HomologyTable};
pub use kauffman::kauffman_jones;
pub use matrix::SparseMatrix;
pub use pd::{parse_pd, LinkDiagram, Sign};
pub use poly::LaurentPolynomial;
pub use snf::{smith_normal_form, smith_normal_form_dense, SmithForm};
