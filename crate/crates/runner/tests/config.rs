use bergman_runner::{ConfigError, ExperimentConfig, ExperimentId};

#[test]
fn minimal_config_takes_defaults() {
    for id in ExperimentId::ALL {
        let c = ExperimentConfig::parse(&format!("experiment_id = \"{id}\"\n")).unwrap();
        assert_eq!(c, ExperimentConfig::defaults(id));
        assert_eq!(c.seed, 42);
    }
}

#[test]
fn echo_round_trips_byte_for_byte() {
    for id in ExperimentId::ALL {
        let c = ExperimentConfig::defaults(id);
        let text = c.serialize().unwrap();
        let back = ExperimentConfig::parse(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.serialize().unwrap(), text);
    }
}

#[test]
fn overrides_are_kept() {
    let c = ExperimentConfig::parse("experiment_id = \"E5\"\nseed = 7\nr = 0.4\n").unwrap();
    assert_eq!((c.seed, c.r), (7, 0.4));
}

fn hypothesis(text: &str) -> String {
    match ExperimentConfig::parse(text) {
        Err(ConfigError::Hypothesis(m)) => m,
        other => panic!("expected a hypothesis error, got {other:?}"),
    }
}

#[test]
fn weight_below_minus_one_is_rejected() {
    assert!(hypothesis("experiment_id = \"E4\"\nalpha = -1.0\n").contains("alpha must exceed -1"));
    assert!(hypothesis("experiment_id = \"E4\"\nbeta = -2.0\n").contains("beta must exceed -1"));
}

#[test]
fn hankel_exponents_must_be_ordered() {
    let m = hypothesis("experiment_id = \"E8\"\np = 3.0\nq = 2.0\n");
    assert!(m.contains("requires 1<p≤q<∞"), "{m}");
    let m = hypothesis("experiment_id = \"E6\"\np = 3.0\nq = 2.0\n");
    assert!(m.contains("requires 1<p≤q<∞"), "{m}");
}

#[test]
fn sigma_condition_is_checked() {
    assert!(hypothesis("experiment_id = \"E9\"\ngamma = 1.0\nsigma = 0.5\n").contains("sigma > -1+gamma*p"));
}

#[test]
fn unknown_ids_and_fields_are_rejected() {
    assert!(matches!(ExperimentConfig::parse("experiment_id = \"E11\"\n"), Err(ConfigError::UnknownExperiment(_))));
    assert!(matches!(ExperimentConfig::parse("experiment_id = \"E1\"\nbogus = 1\n"), Err(ConfigError::Parse(_))));
    let m = hypothesis("experiment_id = \"E7\"\nsymbols = [\"nope\"]\n");
    assert!(m.contains("nope"));
}

#[test]
fn parse_errors_carry_a_position() {
    let Err(ConfigError::Parse(m)) = ExperimentConfig::parse("experiment_id = \"E1\"\nseed = = 3\n") else {
        panic!("expected a parse error");
    };
    assert!(m.contains("line 2"), "{m}");
    assert!(m.contains("column"), "{m}");
}

#[test]
fn three_dimensional_tensor_rules_are_refused() {
    let m = hypothesis("experiment_id = \"E4\"\ndims = [3]\nradii = [0.5, 0.9]\n\n[[quadrature]]\nkind = \"tensor\"\nradial = 8\nangular = 8\n");
    assert!(m.contains("monte_carlo"), "{m}");
}
