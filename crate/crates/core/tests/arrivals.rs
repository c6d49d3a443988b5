use std::path::PathBuf;

use avs_channel::geometry::{trace_image_method, ArrivalsFile, ParseErrorKind, Scenario};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    std::fs::read_to_string(p).unwrap()
}

fn assert_close(a: &ArrivalsFile, b: &ArrivalsFile) {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0);
    assert!(close(a.frequency_hz, b.frequency_hz));
    for (x, y) in [
        (&a.source_depths, &b.source_depths),
        (&a.receiver_depths, &b.receiver_depths),
        (&a.receiver_ranges, &b.receiver_ranges),
    ] {
        assert_eq!(x.len(), y.len());
        assert!(x.iter().zip(y).all(|(p, q)| close(*p, *q)));
    }
    assert_eq!(a.sources.len(), b.sources.len());
    for (s, t) in a.sources.iter().zip(&b.sources) {
        assert_eq!(s.max_arrivals, t.max_arrivals);
        for (r, q) in s.receivers.iter().zip(&t.receivers) {
            assert_eq!(r.len(), q.len());
            for (x, y) in r.iter().zip(q) {
                assert!(close(x.amplitude, y.amplitude) && close(x.phase_deg, y.phase_deg));
                assert!(close(x.delay_s, y.delay_s) && close(x.delay_imag_s, y.delay_imag_s));
                assert!(close(x.source_angle_deg, y.source_angle_deg));
                assert!(close(x.receiver_angle_deg, y.receiver_angle_deg));
                assert_eq!((x.top_bounces, x.bottom_bounces), (y.top_bounces, y.bottom_bounces));
            }
        }
    }
}

#[test]
fn fixtures_round_trip() {
    for name in ["minimal.arr", "three_arrivals.arr"] {
        let parsed = ArrivalsFile::parse(&fixture(name)).unwrap();
        let again = ArrivalsFile::parse(&parsed.render()).unwrap();
        assert_close(&parsed, &again);
        assert_eq!(parsed, again, "{name}");
    }
}

#[test]
fn three_arrival_contents() {
    let f = ArrivalsFile::parse(&fixture("three_arrivals.arr")).unwrap();
    assert_eq!(f.frequency_hz, 12000.0);
    assert_eq!(f.receiver_ranges, vec![1000.0, 2000.0]);
    let per_rx = f.eigenrays();
    assert_eq!(per_rx.len(), 2);
    assert_eq!(per_rx[0].1.len(), 3);
    assert_eq!(per_rx[1].1.len(), 2);
    let r = &per_rx[0].1[1];
    assert_eq!((r.surface_bounces, r.bottom_bounces), (1, 0));
    assert!(r.aoa > 0.0);
    assert_eq!(per_rx[0].1[0].amplitude, 9.2314e-4);
}

#[test]
fn malformed_fixtures_report_lines() {
    type KindCheck = fn(&ParseErrorKind) -> bool;
    let cases: [(&str, usize, KindCheck); 5] = [
        ("malformed_header.arr", 1, |k| matches!(k, ParseErrorKind::MalformedHeader(_))),
        ("malformed_count.arr", 8, |k| matches!(k, ParseErrorKind::CountMismatch { expected: 2, found: 1 })),
        ("malformed_number.arr", 8, |k| matches!(k, ParseErrorKind::NonNumeric { field: "delay", .. })),
        ("malformed_trailing.arr", 9, |k| matches!(k, ParseErrorKind::TrailingData(_))),
        ("malformed_truncated.arr", 4, |k| matches!(k, ParseErrorKind::UnexpectedEof(_))),
    ];
    for (name, line, kind) in cases {
        let e = ArrivalsFile::parse(&fixture(name)).unwrap_err();
        assert_eq!(e.line, line, "{name}: {e}");
        assert!(kind(&e.kind), "{name}: {e}");
        assert!(e.to_string().starts_with(&format!("line {line}:")));
    }
}

#[test]
fn traced_rays_survive_file_round_trip() {
    let s = Scenario::<f64>::shallow_water_reference();
    let rays = trace_image_method(&s).unwrap();
    let file = ArrivalsFile::from_eigenrays(&s, &rays);
    let back = ArrivalsFile::parse(&file.render()).unwrap();
    assert_eq!(back, file);
    for (a, b) in back.all_eigenrays().iter().zip(&rays) {
        assert!((a.aoa - b.aoa).abs() < 1e-15);
        assert!((a.launch_angle - b.launch_angle).abs() < 1e-15);
        assert_eq!((a.delay, a.amplitude), (b.delay, b.amplitude));
    }
}
