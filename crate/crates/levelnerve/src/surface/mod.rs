//! Surfaces: words, the standard presentation, twists, stable graphs and the
//! multicurve catalog.

pub mod catalog;
pub mod graph;
pub mod presentation;
pub mod ribbon;
pub mod twist;
pub mod word;

pub use catalog::{standard_multicurve, CurveSystem, MulticurveRep};
pub use graph::{enumerate_stable_graphs, CutClassification, EdgeKind, StableGraph, Vertex};
pub use presentation::{homology_class, standard_presentation, Model, SurfacePresentation, Target};
pub use twist::{handle_swap, named_automorphism, twist_automorphisms, TwistAuto};
pub use word::{format_word, parse_word, Word};
