use autgeo::algebraic::{is_algebraic, Algebraicity};
use autgeo::config::Caps;
use autgeo::group::{catalog, compute_full_aut, Elem, ID};
use autgeo::term::{normalize, Binding};

#[test]
fn cross_over_a5_is_algebraic_within_four_literals() {
    let a5 = catalog::alternating(5);
    let auts = compute_full_aut(&a5, 60).unwrap();
    let cross: Vec<Vec<Elem>> = a5
        .elements()
        .flat_map(|x| a5.elements().map(move |y| vec![x, y]))
        .filter(|p| p[0] == ID || p[1] == ID)
        .collect();
    assert_eq!(cross.len(), 119);
    let (verdict, closure) = is_algebraic(&cross, 2, &a5, &auts, 4, &Caps::default()).unwrap();
    assert!(closure.exact);
    let Algebraicity::Yes { witness } = verdict else { panic!("cross should be algebraic") };
    let b = Binding::new(&a5, &auts);
    assert!(!witness.equations.is_empty());
    for eq in &witness.equations {
        assert_eq!(normalize(&eq.lhs, &b).unwrap().len(), 4, "{}", eq.lhs);
    }
}
