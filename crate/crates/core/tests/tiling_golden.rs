use opsets_core::measurement::Projector;
use opsets_core::{corpus, render_tiling, TilingFormat};

fn kb1() -> Projector {
    Projector::coordinate(1, 6, &[0, 1, 2]).unwrap()
}

#[test]
fn ascii_goldens() {
    let ascii = TilingFormat::Ascii;
    assert_eq!(
        render_tiling(&corpus::s1(), ascii, None).unwrap(),
        include_str!("golden/s1.txt")
    );
    assert_eq!(
        render_tiling(&corpus::s2(), ascii, None).unwrap(),
        include_str!("golden/s2.txt")
    );
    assert_eq!(
        render_tiling(&corpus::s2(), ascii, Some(&kb1())).unwrap(),
        include_str!("golden/s2_kb1.txt")
    );
}

#[test]
fn svg_goldens() {
    let svg = TilingFormat::Svg;
    assert_eq!(
        render_tiling(&corpus::s1(), svg, None).unwrap(),
        include_str!("golden/s1.svg")
    );
    assert_eq!(
        render_tiling(&corpus::s2(), svg, None).unwrap(),
        include_str!("golden/s2.svg")
    );
    assert_eq!(
        render_tiling(&corpus::s2(), svg, Some(&kb1())).unwrap(),
        include_str!("golden/s2_kb1.svg")
    );
}

#[test]
fn highlight_must_fit_the_grid() {
    let p = Projector::coordinate(1, 3, &[0]).unwrap();
    assert!(render_tiling(&corpus::s2(), TilingFormat::Ascii, Some(&p)).is_err());
}
