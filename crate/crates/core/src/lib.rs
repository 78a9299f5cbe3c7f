//! Edge-connectivity structures of finite rooted digraphs: flames, large
//! edge sets, v-linked sets and the edge-connectivity gammoid.

pub mod construct;
pub mod fixtures;
pub mod flame;
pub mod flow;
pub mod format;
pub mod graph;
pub mod linked;
pub mod sets;
pub mod verify;

pub use flow::{CutWitness, FlowError, Path, PathSource, PathSystem};
pub use graph::{CycleCertificate, DigraphView, Edge, GraphError, RootedDigraph};
pub use sets::{EdgeId, EdgeSet, VertexId, VertexSet};
