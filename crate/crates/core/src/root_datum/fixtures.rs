//! Named root data in the `Z^rank` normalization. Semisimple simply connected
//! groups use the fundamental-weight basis, so simple coroots are the
//! standard basis vectors.

use super::RootDatum;

fn build(rank: usize, roots: &[&[i64]], coroots: &[&[i64]], name: &str) -> RootDatum {
    RootDatum::from_i64s(rank, roots, coroots, Some(name)).expect("fixture data is valid")
}

pub fn sl2() -> RootDatum {
    build(1, &[&[2]], &[&[1]], "SL2")
}

pub fn pgl2() -> RootDatum {
    build(1, &[&[1]], &[&[2]], "PGL2")
}

pub fn gl2() -> RootDatum {
    build(2, &[&[1, -1]], &[&[1, -1]], "GL2")
}

pub fn sl3() -> RootDatum {
    build(2, &[&[2, -1], &[-1, 2]], &[&[1, 0], &[0, 1]], "SL3")
}

/// Character lattice = root lattice, basis of simple roots.
pub fn pgl3() -> RootDatum {
    build(2, &[&[1, 0], &[0, 1]], &[&[2, -1], &[-1, 2]], "PGL3")
}

/// Type C2, simple root 0 short and simple root 1 long.
pub fn sp4() -> RootDatum {
    build(2, &[&[2, -1], &[-2, 2]], &[&[1, 0], &[0, 1]], "Sp4")
}

/// The dual datum of Sp4 (adjoint type B2).
pub fn so5() -> RootDatum {
    build(2, &[&[1, 0], &[0, 1]], &[&[2, -1], &[-2, 2]], "SO5")
}

/// Simple root 0 short, simple root 1 long.
pub fn g2() -> RootDatum {
    build(2, &[&[2, -1], &[-3, 2]], &[&[1, 0], &[0, 1]], "G2")
}

pub fn sl2_x_pgl2() -> RootDatum {
    build(2, &[&[2, 0], &[0, 1]], &[&[1, 0], &[0, 2]], "SL2xPGL2")
}

pub fn torus(rank: usize) -> RootDatum {
    RootDatum::from_i64s(rank, &[], &[], Some(&format!("T{rank}"))).expect("torus is valid")
}

/// The fixtures shipped as JSON files, by file stem.
pub fn named_fixtures() -> Vec<(&'static str, RootDatum)> {
    vec![
        ("sl2", sl2()),
        ("pgl2", pgl2()),
        ("gl2", gl2()),
        ("sl3", sl3()),
        ("pgl3", pgl3()),
        ("sp4", sp4()),
        ("so5", so5()),
        ("g2", g2()),
        ("sl2_x_pgl2", sl2_x_pgl2()),
        ("torus2", torus(2)),
    ]
}
