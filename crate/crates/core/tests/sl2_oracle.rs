mod common;

use common::{brute_sl2, data_dir, load, read, sl2_fixture};
use lietab_core::cyclo::CycNum;

#[test]
fn brute_force_tables_are_character_tables() {
    for q in [2, 4, 8] {
        let t = brute_sl2(q);
        assert_eq!(t.group_order, u64::from(q * (q * q - 1)));
        assert_eq!(t.rows.len(), t.classes.len(), "q = {q}");
        let rows: Vec<(&String, &Vec<CycNum>)> = t.rows.iter().collect();
        for (i, (a, x)) in rows.iter().enumerate() {
            for (b, y) in &rows[i..] {
                let expect = CycNum::from_int(i64::from(a == b));
                assert_eq!(t.inner(x, y), expect, "<{a}, {b}> at q = {q}");
            }
        }
        let mut sum = 0i64;
        for (name, r) in &t.rows {
            let d = r[0].as_rational().expect("rational degree");
            assert!(d.is_integer() && *d.numer() > 0.into(), "{name}");
            let d: i64 = d.to_integer().try_into().unwrap();
            sum += d * d;
        }
        assert_eq!(sum as u64, t.group_order);
    }
}

#[test]
fn small_cases_are_s3_and_a5() {
    let degrees = |q| {
        let mut d: Vec<String> = brute_sl2(q)
            .rows
            .values()
            .map(|r| r[0].to_string())
            .collect();
        d.sort();
        d
    };
    assert_eq!(degrees(2), ["1", "1", "2"]);
    assert_eq!(degrees(4), ["1", "3", "3", "4", "5"]);
}

#[test]
fn fixtures_hold_the_frozen_oracles() {
    for q in [2, 4, 8] {
        let fresh = sl2_fixture(&brute_sl2(q));
        assert_eq!(
            fresh,
            read(&format!("sl2_q{q}.json")),
            "regenerate with --ignored"
        );
    }
}

#[test]
fn centralizers_agree_with_the_group() {
    for q in [2, 4, 8] {
        let t = brute_sl2(q);
        let m = load(&format!("sl2_q{q}.json"));
        let g = &m.groups[0];
        for (c, &n) in t.classes.iter().zip(&t.centralizers) {
            let stored = g.class(c).unwrap().centralizer_order.as_integer().unwrap();
            assert_eq!(stored, n.into(), "{c} at q = {q}");
        }
    }
}

#[test]
#[ignore = "rewrites the fixture files"]
fn regenerate_fixtures() {
    for q in [2, 4, 8] {
        std::fs::write(
            data_dir().join(format!("sl2_q{q}.json")),
            sl2_fixture(&brute_sl2(q)),
        )
        .unwrap();
    }
}
