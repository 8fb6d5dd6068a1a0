use super::*;
use crate::covers::derived_cover;
use crate::surface::graph::Vertex;

fn graph(g: usize, n: usize, vs: &[(usize, &[usize])], edges: &[[usize; 2]]) -> StableGraph {
    StableGraph {
        g,
        n,
        vertices: vs.iter().map(|(genus, marks)| Vertex { genus: *genus, marks: marks.to_vec() }).collect(),
        edges: edges.to_vec(),
    }
}

fn nonsep_loop() -> StableGraph {
    graph(2, 0, &[(1, &[])], &[[0, 0]])
}

fn bridge() -> StableGraph {
    graph(2, 0, &[(1, &[]), (1, &[])], &[[0, 1]])
}

fn cut_pair() -> StableGraph {
    graph(2, 1, &[(1, &[]), (0, &[1])], &[[0, 1], [0, 1]])
}

#[test]
fn loop_kernel_is_m_e() {
    let k = abelian_local_kernel(&nonsep_loop(), 2).unwrap();
    assert_eq!(k.generators, vec![vec![2]]);
    assert_eq!(k.quotient, vec![2]);
    assert_eq!(k.index(), Some(2));
}

#[test]
fn bridge_kernel_is_everything() {
    let k = abelian_local_kernel(&bridge(), 3).unwrap();
    assert_eq!(k.generators, vec![vec![1]]);
    assert!(k.quotient.is_empty());
    assert_eq!(k.index(), Some(1));
}

#[test]
fn cut_pair_kernel() {
    let k = abelian_local_kernel(&cut_pair(), 2).unwrap();
    assert_eq!(k.generators, vec![vec![1, 1], vec![0, 2]]);
    assert_eq!(k.quotient, vec![2]);
    let k3 = abelian_local_kernel(&cut_pair(), 3).unwrap();
    assert_eq!(k3.quotient, vec![3]);
}

#[test]
fn kernel_rejects_bad_modulus() {
    assert!(matches!(abelian_local_kernel(&bridge(), 1), Err(Error::Argument(_))));
}

#[test]
fn homology_cover_kernels() {
    let lim = Limits::default();
    let spec = CoverSpec::homology_cover(2, 0, 2);
    let k = looijenga_local_kernel(&bridge(), &spec, 2, &lim).unwrap();
    assert_eq!(k.generators, vec![vec![2]]);
    let k = looijenga_local_kernel(&nonsep_loop(), &spec, 2, &lim).unwrap();
    assert_eq!(k.generators, vec![vec![4]]);
}

#[test]
fn looijenga_precondition_is_per_type() {
    let lim = Limits::default();
    let spec = CoverSpec::identity(2, 0);
    let k = looijenga_local_kernel(&nonsep_loop(), &spec, 2, &lim).unwrap();
    assert_eq!(k.generators, vec![vec![2]]);
    let theta = graph(2, 0, &[(0, &[]), (0, &[])], &[[0, 1], [0, 1], [0, 1]]);
    assert_eq!(looijenga_local_kernel(&theta, &spec, 3, &lim).unwrap().quotient, vec![3, 3, 3]);
    let spec = CoverSpec::identity(2, 1);
    assert!(matches!(
        looijenga_local_kernel(&cut_pair(), &spec, 2, &lim),
        Err(Error::Precondition(_))
    ));
    assert!(looijenga_local_kernel(&bridge(), &spec, 2, &lim).is_err());
}

#[test]
fn smoothness_of_identity_and_derived() {
    let lim = Limits::default();
    let id = CoverSpec::identity(2, 0);
    let r = smoothness_hypothesis(&id, &lim).unwrap();
    assert!(r.holds);
    assert!(!r.no_separating);
    assert_eq!(r.types.len(), 7);
    assert!(r.ramified_over_punctures);
    let r = smoothness_hypothesis(&CoverSpec::identity(2, 1), &lim).unwrap();
    assert!(!r.holds);
    assert!(!r.ramified_over_punctures);
    assert!(r.counterexample.unwrap().edge_cut_classification().cuts.len() > 0);
    let cover = Cover::new(&id, &lim).unwrap();
    let d = derived_cover(&cover, 2, &lim).unwrap();
    let r = smoothness_hypothesis(&d, &lim).unwrap();
    assert!(r.holds && r.no_separating, "{:?}", r.counterexample);
    assert_eq!(r.types.len(), 7);
}

#[test]
fn stratum_reports() {
    let r = stratum_report(&bridge(), 3, LevelKind::Abelian).unwrap();
    assert_eq!(r.smoothness, Smoothness::Smooth);
    assert_eq!(r.embedding, Embedding::Embedding);
    assert_eq!(r.descriptor.unwrap().to_string(), "M(3)_{1,1} x M(3)_{1,1}");
    let r = stratum_report(&nonsep_loop(), 2, LevelKind::Abelian).unwrap();
    assert_eq!(r.embedding, Embedding::Undetermined);
    assert_eq!(r.descriptor, Some(LevelDescriptor::LevelZero { m: 2, g: 1, n: 2 }));
    let r = stratum_report(&graph(3, 0, &[(2, &[])], &[[0, 0]]), 2, LevelKind::Abelian).unwrap();
    assert_eq!(r.embedding, Embedding::SelfIntersecting);
    let r = stratum_report(&cut_pair(), 2, LevelKind::Abelian).unwrap();
    assert_eq!(r.smoothness, Smoothness::PossiblySingular);
    assert_eq!(r.embedding, Embedding::NotApplicable);
    assert!(stratum_report(&bridge(), 2, LevelKind::Looijenga).is_err());
    assert!("nope".parse::<LevelKind>().is_err());
}
