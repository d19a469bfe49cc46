use frenet_ife::config::{
    parse_config, parse_curve, CaseConfig, CaseId, CoefficientConfig, DiscretizationConfig, DomainConfig,
    InterfaceConfig, OutputConfig, QuadConfig, RunConfig, Sigma0,
};
use frenet_ife::geometry::{CurveSpec, Orientation};
use frenet_ife::Error;
use proptest::prelude::*;

fn arb_config() -> impl Strategy<Value = RunConfig> {
    let geometry = (
        0.5f64..0.9,
        (-0.05f64..0.05, -0.05f64..0.05),
        prop::bool::ANY,
        prop::sample::subsequence(vec![16usize, 32, 64], 1..=3),
    );
    let numerics = (
        0.01f64..100.0,
        1.0f64..1000.0,
        1usize..=3,
        prop::option::of(0.5f64..500.0),
        prop::option::of(1usize..12),
        prop::option::of(1usize..12),
        prop::option::of(1usize..12),
        prop::sample::select(vec![4, 6, 8]),
    );
    let output = ("[a-z0-9_/]{1,16}", 0u64..(i64::MAX as u64), prop::bool::ANY, prop::bool::ANY);
    (geometry, numerics, output).prop_map(
        |((radius, (cx, cy), cw, meshes), (bm, ratio, degree, sigma, qv, qe, qi, power), (dir, seed, det, dump))| {
            RunConfig {
                domain: DomainConfig::default(),
                interface: InterfaceConfig {
                    spec: CurveSpec::Circle {
                        center: [cx, cy],
                        radius,
                    },
                    orientation: if cw { Orientation::Cw } else { Orientation::Ccw },
                },
                coefficients: CoefficientConfig {
                    beta_minus: bm,
                    beta_plus: bm * ratio,
                },
                discretization: DiscretizationConfig {
                    degree,
                    sigma0: sigma.map_or(Sigma0::Auto, Sigma0::Fixed),
                    meshes,
                },
                quad: QuadConfig {
                    volume: qv,
                    edge: qe,
                    interface: qi,
                },
                case: CaseConfig {
                    id: CaseId::Circle,
                    power,
                },
                output: OutputConfig {
                    dir,
                    seed,
                    deterministic: det,
                    dump_ife: dump,
                },
            }
        },
    )
}

proptest! {
    #[test]
    fn parse_serialize_parse_is_identity(cfg in arb_config()) {
        prop_assert!(cfg.validate().is_ok());
        let text = cfg.to_toml().unwrap();
        let back = parse_config(&text).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(parse_config(&back.to_toml().unwrap()).unwrap(), back);
    }

    #[test]
    fn parsers_never_panic(text in "\\PC{0,200}") {
        let _ = parse_config(&text);
        let _ = parse_curve(&text);
    }

    #[test]
    fn coarse_meshes_are_refused(radius in 0.05f64..0.2) {
        let mut cfg = RunConfig::circle(radius);
        cfg.discretization.meshes = vec![4];
        prop_assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }
}

#[test]
fn every_curve_kind_parses() {
    for text in [
        "kind = \"circle\"\nradius = 0.5",
        "kind = \"ellipse\"\ncenter = [0.1, 0.0]\nsemi_axes = [0.7, 0.4]",
        "kind = \"flower\"\nr0 = 0.5\namplitude = 0.1\nlobes = 5",
        "kind = \"line\"\npoint = [0.0, 0.1]\ndirection = [1.0, 1.0]",
        "kind = \"trig\"\nx = { cos = [0.6] }\ny = { sin = [0.4], constant = 0.1 }",
    ] {
        parse_curve(text).unwrap_or_else(|e| panic!("{text}: {e}"));
    }
}

#[test]
fn degenerate_curves_are_rejected() {
    for text in [
        "kind = \"ellipse\"\nsemi_axes = [0.0, 0.4]",
        "kind = \"line\"\npoint = [0.0, 0.0]\ndirection = [0.0, 0.0]",
        "kind = \"trig\"\nx = { constant = 1.0 }\ny = { constant = 2.0 }",
    ] {
        assert!(parse_curve(text).is_err(), "{text}");
    }
}
