//! End-to-end use of the public API: generate, persist, reload, test, and
//! run the power harness.

use dchat::io::{self, ColumnSpec};
use dchat::power::{power_curve, Axis, PowerSettings};
use dchat::reproduce::{reproduce, Target};
use dchat::{
    causal_deltas, generate, reci_verdict, synchronized_test, CausalVerdict, GeneratorSpec,
    Hypothesis, Model, TestConfig, TiePolicy,
};

#[test]
fn generated_data_survives_csv_and_gives_same_report() {
    let d = generate(&GeneratorSpec::new(Model::QuadraticMV, 30).with_dim(3), 4).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("q.csv");
    let cols = io::write_paired_csv(std::fs::File::create(&path).unwrap(), &d).unwrap();
    let back = io::load_paired_csv(&path, &cols).unwrap();
    assert_eq!(back, d);
    let config = TestConfig::new(49, 8, TiePolicy::Error);
    assert_eq!(
        synchronized_test(&d.x, &d.y, &config).unwrap(),
        synchronized_test(&back.x, &back.y, &config).unwrap()
    );
}

#[test]
fn explicit_column_selection() {
    let text = "t,a_re,a_im,b,c\n0,1,0.5,2,9\n1,-1,0.25,3,8\n2,0.5,-2,5,1\n3,4,1,-1,0\n";
    let d = io::read_paired_csv(text.as_bytes(), &ColumnSpec::new(&["a", "b"], &["c"])).unwrap();
    assert_eq!((d.n(), d.x.dim(), d.y.dim()), (4, 2, 1));
    assert!(!d.x.is_real());
    assert!(d.y.is_real());
}

#[test]
fn noiseless_w_shape_points_from_x_to_y() {
    let d = generate(&GeneratorSpec::new(Model::WShape, 201), 1).unwrap();
    let r = causal_deltas(&d.x, &d.y, TiePolicy::RandomBreak { seed: 1 }).unwrap();
    assert_eq!(reci_verdict(&r), CausalVerdict::XCausesY);
    assert!(r.dch_y_given_x > r.dch_x_given_y);
}

#[test]
fn power_curve_csv_has_one_row_per_point() {
    let settings = PowerSettings::new(0.05, 4, 19, 3);
    let spec = GeneratorSpec::new(Model::LogQuadraticMV, 20);
    let curve = power_curve(&spec, Axis::SampleSize, &[20.0, 30.0], &settings).unwrap();
    let mut buf = Vec::new();
    io::write_power_csv(&mut buf, &[curve], &settings).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().clone();
    assert_eq!(header.len(), 15);
    assert_eq!(&header[6], Hypothesis::DchYfX.label());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[1][2], "30");
    // Raw Chatterjee does not apply to multivariate data.
    assert_eq!(&rows[0][8], "");
    assert!(text.lines().next().unwrap().starts_with("# dchat"));
}

#[test]
fn fig2_grid_at_tiny_scale() {
    let dir = tempfile::tempdir().unwrap();
    let settings = PowerSettings::new(0.05, 2, 5, 1);
    let paths = reproduce(Target::Fig2, &settings, io::OutputFormat::Csv, dir.path()).unwrap();
    let text = std::fs::read_to_string(&paths[0]).unwrap();
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 44);
    for model in ["linear", "w-shape", "sinusoid", "circular"] {
        assert_eq!(
            rows.iter()
                .filter(|r| r.starts_with(&format!("{model},")))
                .count(),
            11
        );
    }
}
