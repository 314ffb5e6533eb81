use fanoci::conditions::CheckOptions;
use fanoci::expansion::AmbientSetup;
use fanoci::harness::{empirical_stats, SampleSpec};

fn spec(count: usize) -> SampleSpec {
    SampleSpec {
        setup: AmbientSetup::new(4, 2, 4).unwrap(),
        p: 101,
        density: 1.0,
        seed: 2024,
        count,
    }
}

#[test]
fn desk_run_is_deterministic() {
    let opts = CheckOptions::default();
    let a = empirical_stats(&spec(3), 10, &opts).unwrap();
    let b = empirical_stats(&spec(3), 10, &opts).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    println!("{}", a.to_json());
}
