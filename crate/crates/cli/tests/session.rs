use geomod_cli::{RunConfig, Session};
use num_complex::Complex64;

#[test]
fn config_validation() {
    let mut c = RunConfig::default();
    c.validate().unwrap();
    c.c_bounds = vec![8, 4];
    assert!(c.validate().is_err());
    c = RunConfig { basepoint: Some([0.0, -1.0]), ..RunConfig::default() };
    assert!(c.validate().is_err());
    c = RunConfig { group: "Gamma(2)".into(), basepoint: Some([0.1, 0.9]), ..RunConfig::default() };
    c.validate().unwrap();
    let p = c.preset().unwrap();
    assert_eq!(c.basepoint(&p), Complex64::new(0.1, 0.9));
}

#[test]
fn word_specs() {
    let s = Session::new(RunConfig::default()).unwrap();
    let i = s.functional(&["f,E".into(), "0.5*fbar".into(), "".into()]).unwrap();
    assert_eq!(i.coefficient(&[0, 2]), Complex64::new(1.0, 0.0));
    assert_eq!(i.coefficient(&[1]), Complex64::new(0.5, 0.0));
    assert_eq!(i.constant_term(), Complex64::new(1.0, 0.0));
    assert!(s.functional(&["x*f".into()]).is_err());
    assert!(s.functional(&["g".into()]).is_err());
}

#[test]
fn cache_round_trip_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { cache_dir: Some(dir.path().to_path_buf()), ..RunConfig::default() };
    let s = Session::new(cfg).unwrap();
    let a = s.loops(2).unwrap();
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 1);
    let b = s.loops(2).unwrap();
    assert_eq!(a.generator_loop(0).unwrap(), b.generator_loop(0).unwrap());
}

#[test]
fn points_in_both_spellings() {
    use geomod_cli::config::parse_point;
    use num_complex::Complex64;
    assert_eq!(parse_point("0.1+0.8i").unwrap(), Complex64::new(0.1, 0.8));
    assert_eq!(parse_point("0.1, 0.8").unwrap(), Complex64::new(0.1, 0.8));
    assert_eq!(parse_point("-0.2-1.5e-1i").unwrap(), Complex64::new(-0.2, -0.15));
    assert_eq!(parse_point("2i").unwrap(), Complex64::new(0.0, 2.0));
    assert_eq!(parse_point("1+i").unwrap(), Complex64::new(1.0, 1.0));
    assert!(parse_point("0.3").is_err());
}
