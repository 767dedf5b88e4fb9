use posmap::regions::Classification;
use posmap::scan::{
    emit_csv, parse_csv, read_csv, render_svg, scan, write_csv, Layer, ScanConfig, ScanMode,
};

fn csv_text(config: &ScanConfig) -> String {
    let grid = scan(config).unwrap();
    let mut buf = Vec::new();
    write_csv(&grid, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn matches_golden_file() {
    let golden = include_str!("data/scan_res21.csv");
    let config = ScanConfig {
        resolution: 21,
        ..ScanConfig::default()
    };
    assert_eq!(csv_text(&config), golden);
    assert_eq!(csv_text(&config), csv_text(&config));
}

#[test]
fn serial_and_parallel_agree() {
    let config = ScanConfig {
        resolution: 31,
        mode: ScanMode::Compare,
        ..ScanConfig::default()
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| scan(&config).unwrap())
    };
    let serial = run(1);
    let parallel = run(4);
    assert_eq!(serial, parallel);
}

#[test]
fn csv_round_trip_through_file() {
    let grid = scan(&ScanConfig {
        resolution: 17,
        ..ScanConfig::default()
    })
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    emit_csv(&grid, &path).unwrap();
    let rows = read_csv(&path).unwrap();
    assert_eq!(rows.len(), grid.cells.len());
    for (index, (row, cell)) in rows.iter().zip(&grid.cells).enumerate() {
        let (alpha, beta) = grid.config.cell_center(index);
        assert!((row.alpha - alpha).abs() <= 1e-9 * alpha.abs().max(1.0));
        assert!((row.beta - beta).abs() <= 1e-9 * beta.abs().max(1.0));
        for layer in Layer::ALL {
            assert_eq!(row.get(layer), layer.get(cell));
        }
    }
}

#[test]
fn csv_rows_satisfy_implications() {
    let rows = parse_csv(&csv_text(&ScanConfig::default())).unwrap();
    assert_eq!(rows.len(), 101 * 101);
    for row in rows {
        let c = Classification {
            positive: row.get(Layer::Positive),
            two_positive: row.get(Layer::TwoPositive),
            completely_positive: row.get(Layer::Cp),
            completely_copositive: row.get(Layer::Ccp),
            positive_not_cp: row.get(Layer::PosNotCp),
            two_positive_not_cp: row.get(Layer::TwoPosNotCp),
            decomposable_sufficient: row.get(Layer::DecompSuff),
            decomposable_and_two_positive: row.get(Layer::DecompAnd2Pos),
            higher_order: true,
        };
        c.check_invariants().unwrap();
    }
}

#[test]
fn positive_fraction_at_high_resolution() {
    let grid = scan(&ScanConfig {
        resolution: 401,
        ..ScanConfig::default()
    })
    .unwrap();
    let f = grid.fraction(Layer::Positive);
    assert!(f > 0.0 && f < 1.0);
    // for beta >= 0 the boundary is alpha = 0, the center row at this resolution
    let h = grid.config.alpha_step();
    for ib in 0..401 {
        let beta = grid.config.beta_center(ib);
        if beta > 0.0 {
            let t = grid.transitions(Layer::Positive, ib);
            assert_eq!(t.len(), 1);
            assert!(t[0].abs() <= h, "{t:?}");
        }
    }
    grid.check_invariants().unwrap();
}

#[test]
fn svg_layers() {
    let grid = scan(&ScanConfig {
        resolution: 25,
        ..ScanConfig::default()
    })
    .unwrap();
    let mut fills = Vec::new();
    for layer in Layer::ALL {
        let svg = render_svg(&grid, layer);
        let cells = grid.cells.iter().filter(|c| layer.get(c)).count();
        assert_eq!(svg.matches("<rect x=").count() - 2, cells, "{layer}");
        for b in layer.boundaries() {
            assert!(svg.contains(&format!("data-boundary=\"{}\"", b.name())));
        }
        let fill = svg.split("class=\"cells\" fill=\"").nth(1).unwrap()[..7].to_string();
        assert!(!fills.contains(&fill), "{layer} reuses {fill}");
        fills.push(fill);
    }
}
