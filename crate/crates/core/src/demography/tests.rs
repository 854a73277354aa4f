use super::*;

fn row(user: u64, msg: &str, black: f64) -> PosteriorRow {
    let rest = (1.0 - black) / 3.0;
    PosteriorRow {
        user_id: user,
        message_id: msg.into(),
        probs: [rest, black, rest, rest],
    }
}

#[test]
fn averaging() {
    let rows = vec![
        row(1, "a", 0.9),
        row(1, "b", 0.7),
        row(2, "c", 0.35),
        row(3, "d", 0.9),
        row(3, "e", 0.9),
        row(3, "f", 0.6),
    ];
    let m = average_posteriors(&rows, &[1, 2, 3]).unwrap();
    assert!((m[&1][1] - 0.8).abs() < 1e-15);
    assert_eq!(m[&2][1], 0.35);
    assert!((m[&3][1] - 0.8).abs() < 1e-15);
    for v in m.values() {
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-6);
    }
    let e = average_posteriors(&rows, &[1, 4, 5]).unwrap_err();
    assert!(e.to_string().contains("4, 5"), "{e}");
}

#[test]
fn strict_threshold() {
    let means: BTreeMap<u64, [f64; 4]> = [(1, [0.05, 0.85, 0.05, 0.05]), (2, [0.1, 0.8, 0.05, 0.05])]
        .into_iter()
        .collect();
    let g = label_group(&means, Category(1), 0.8, &Overrides::default()).unwrap();
    assert!(g.users[&1].protected);
    assert!(!g.users[&2].protected);
}

#[test]
fn removals_leave_136_of_168() {
    let mut means = BTreeMap::new();
    for u in 0..1000u64 {
        let p = if u < 168 { 0.9 } else { 0.1 };
        means.insert(u, [(1.0 - p) / 3.0, p, (1.0 - p) / 3.0, (1.0 - p) / 3.0]);
    }
    let overrides = Overrides {
        removals: (0..32).collect(),
        additions: BTreeSet::new(),
    };
    let g = label_group(&means, Category(1), 0.8, &overrides).unwrap();
    assert_eq!(g.protected_count(), 136);
    assert!(g.protected().all(|u| !overrides.removals.contains(&u)));
    assert_eq!(g.users[&0].provenance, Provenance::OverrideRemoved);
}

#[test]
fn additions_after_removals_and_unknown_users() {
    let means: BTreeMap<u64, [f64; 4]> = [(1, [0.7, 0.1, 0.1, 0.1]), (2, [0.1, 0.9, 0.0, 0.0])].into_iter().collect();
    let o = Overrides {
        removals: [1].into(),
        additions: [1].into(),
    };
    let g = label_group(&means, Category(1), 0.8, &o).unwrap();
    assert!(g.users[&1].protected);
    assert_eq!(g.users[&1].provenance, Provenance::OverrideAdded);
    let bad = Overrides {
        removals: [9].into(),
        additions: BTreeSet::new(),
    };
    assert!(label_group(&means, Category(1), 0.8, &bad).is_err());
    assert!(label_group(&means, Category(1), 1.0, &Overrides::default()).is_err());
}

#[test]
fn override_file_formats() {
    let text = "# reviewed\n[removals]\n12\n13 # duplicate account\n\nadditions:\n7\n12\n";
    let o = parse_overrides(text, Path::new("o.txt")).unwrap();
    assert_eq!(o.removals, [12, 13].into());
    assert_eq!(o.additions, [7, 12].into());
    let e = parse_overrides("5\n", Path::new("o.txt")).unwrap_err();
    assert!(matches!(e, Error::Parse { line: 1, .. }));
    let e = parse_overrides("removals\nabc\n", Path::new("o.txt")).unwrap_err();
    assert!(matches!(e, Error::Parse { line: 2, .. }));
}

#[test]
fn posterior_file_validation() {
    let good = "user_id,message_id,p_white,p_black,p_hispanic,p_asian\n1,m1,0.1,0.7,0.1,0.1\n";
    let rows = parse_posteriors(good.as_bytes(), Path::new("p.csv")).unwrap();
    assert_eq!(rows[0].probs, [0.1, 0.7, 0.1, 0.1]);
    let bad_sum = "user_id,message_id,p_white,p_black,p_hispanic,p_asian\n1,m1,0.1,0.7,0.1,0.2\n";
    let e = parse_posteriors(bad_sum.as_bytes(), Path::new("p.csv")).unwrap_err();
    assert!(matches!(e, Error::Parse { line: 2, .. }), "{e:?}");
    let bad_range = "user_id,message_id,p_white,p_black,p_hispanic,p_asian\n1,m1,-0.1,0.9,0.1,0.1\n";
    assert!(parse_posteriors(bad_range.as_bytes(), Path::new("p.csv")).is_err());
    let missing = "user_id,p_white\n";
    assert!(matches!(
        parse_posteriors(missing.as_bytes(), Path::new("p.csv")).unwrap_err(),
        Error::Schema(_)
    ));
}

#[test]
fn categories() {
    assert_eq!("black".parse::<Category>().unwrap(), Category(1));
    assert_eq!("AA".parse::<Category>().unwrap(), Category(1));
    assert_eq!("p_asian".parse::<Category>().unwrap(), Category(3));
    assert_eq!("2".parse::<Category>().unwrap(), Category(2));
    assert!("martian".parse::<Category>().is_err());
}

#[test]
fn group_file_round_trip() {
    let means: BTreeMap<u64, [f64; 4]> = [(1, [0.0, 0.9, 0.1, 0.0]), (2, [0.9, 0.0, 0.1, 0.0])].into_iter().collect();
    let g = label_group(&means, Category(1), 0.8, &Overrides::default()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("groups.csv");
    write_groups(std::fs::File::create(&path).unwrap(), &g, "aa", "other").unwrap();
    let back = read_groups(&path).unwrap();
    assert_eq!(back[&1], "aa");
    assert_eq!(back[&2], "other");
}
