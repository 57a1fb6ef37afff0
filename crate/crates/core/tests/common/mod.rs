//! Shared test support: SL₂(q), q = 2^k, by brute force over GF(q), and the
//! fixture files built from the closed-form table.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;

use lietab_core::cyclo::{CycNum, Rat};
use lietab_core::model::{ingest_str, Model};
use num_bigint::BigInt;
use serde_json::{json, Value};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn load(name: &str) -> Model {
    let text = std::fs::read_to_string(data_dir().join(name)).unwrap();
    ingest_str(&text).unwrap()
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(data_dir().join(name)).unwrap()
}

/// GF(2^k) with elements as bit vectors.
#[derive(Clone, Copy)]
struct Gf {
    k: u32,
    poly: u32,
}

impl Gf {
    fn new(q: u32) -> Gf {
        let k = q.trailing_zeros();
        assert_eq!(1 << k, q);
        let poly = match k {
            1 => 0b11,
            2 => 0b111,
            3 => 0b1011,
            4 => 0b10011,
            _ => panic!("no modulus for GF(2^{k})"),
        };
        Gf { k, poly }
    }

    fn q(self) -> u32 {
        1 << self.k
    }

    fn mul(self, a: u32, b: u32) -> u32 {
        let mut acc = 0;
        for i in 0..self.k {
            if b >> i & 1 == 1 {
                acc ^= a << i;
            }
        }
        for i in (self.k..2 * self.k).rev() {
            if acc >> i & 1 == 1 {
                acc ^= self.poly << (i - self.k);
            }
        }
        acc
    }

    fn inv(self, a: u32) -> u32 {
        (1..self.q()).find(|&b| self.mul(a, b) == 1).unwrap()
    }

    /// Absolute trace to GF(2).
    fn trace(self, a: u32) -> u32 {
        let mut t = 0;
        let mut x = a;
        for _ in 0..self.k {
            t ^= x;
            x = self.mul(x, x);
        }
        t
    }
}

type Mat = [u32; 4];

fn mmul(f: Gf, x: &Mat, y: &Mat) -> Mat {
    [
        f.mul(x[0], y[0]) ^ f.mul(x[1], y[2]),
        f.mul(x[0], y[1]) ^ f.mul(x[1], y[3]),
        f.mul(x[2], y[0]) ^ f.mul(x[3], y[2]),
        f.mul(x[2], y[1]) ^ f.mul(x[3], y[3]),
    ]
}

const ID: Mat = [1, 0, 0, 1];

fn minv(x: &Mat) -> Mat {
    // Determinant one and characteristic two.
    [x[3], x[1], x[2], x[0]]
}

fn order(f: Gf, x: &Mat) -> u32 {
    let mut y = *x;
    let mut n = 1;
    while y != ID {
        y = mmul(f, &y, x);
        n += 1;
    }
    n
}

/// A character table computed from the group itself.
pub struct BruteTable {
    pub q: u32,
    pub group_order: u64,
    pub classes: Vec<String>,
    pub centralizers: Vec<u64>,
    pub rows: BTreeMap<String, Vec<CycNum>>,
}

impl BruteTable {
    /// `⟨a, b⟩ = Σ_C a(C)·conj(b(C)) / |C_G(g_C)|`.
    pub fn inner(&self, a: &[CycNum], b: &[CycNum]) -> CycNum {
        let mut acc = CycNum::zero();
        for ((x, y), c) in a.iter().zip(b).zip(&self.centralizers) {
            let w = CycNum::from_rat(Rat::new(BigInt::from(1), BigInt::from(*c)));
            acc = &acc + &(&(x * &y.conj()) * &w);
        }
        acc
    }
}

/// SL₂(q) for q ∈ {2, 4, 8, 16}: classes found by conjugation, characters by
/// inducing from B, U and a non-split torus.
pub fn brute_sl2(q: u32) -> BruteTable {
    let f = Gf::new(q);
    let mut elems = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    if f.mul(a, d) ^ f.mul(b, c) == 1 {
                        elems.push([a, b, c, d]);
                    }
                }
            }
        }
    }
    let n = elems.len();
    let index: HashMap<Mat, usize> = elems.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut class_of = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let id = sizes.len();
        let mut size = 0;
        for y in &elems {
            let c = mmul(f, &mmul(f, y, &elems[i]), &minv(y));
            let j = index[&c];
            if class_of[j] == usize::MAX {
                class_of[j] = id;
                size += 1;
            }
        }
        sizes.push(size);
    }

    let g = (1..q)
        .find(|&x| (1..q - 1).all(|e| pow(f, x, e) != 1))
        .unwrap();
    let t: Mat = [g, 0, 0, f.inv(g)];
    let s: Mat = *elems.iter().find(|x| order(f, x) == q + 1).unwrap();
    let u: Mat = [1, 1, 0, 1];
    let mut reps: Vec<(String, Mat)> = vec![("1".into(), ID), ("u".into(), u)];
    for l in 1..=(q - 2) / 2 {
        reps.push((format!("a{l}"), mpow(f, &t, l)));
    }
    for m in 1..=q / 2 {
        reps.push((format!("b{m}"), mpow(f, &s, m)));
    }
    let rep_classes: Vec<usize> = reps.iter().map(|(_, m)| class_of[index[m]]).collect();
    let mut sorted = rep_classes.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(
        sorted.len(),
        sizes.len(),
        "representatives must meet every class once"
    );

    let induce = |member: &dyn Fn(&Mat) -> Option<CycNum>, h_order: usize| -> Vec<CycNum> {
        reps.iter()
            .map(|(_, r)| {
                let mut acc = CycNum::zero();
                for y in &elems {
                    let c = mmul(f, &mmul(f, y, r), &minv(y));
                    if let Some(v) = member(&c) {
                        acc = &acc + &v;
                    }
                }
                acc.scale(&Rat::new(BigInt::from(1), BigInt::from(h_order as i64)))
            })
            .collect()
    };

    let log: HashMap<u32, i64> = (0..q - 1).map(|e| (pow(f, g, e), e as i64)).collect();
    let mut rows = BTreeMap::new();
    rows.insert("1".to_string(), vec![CycNum::one(); reps.len()]);
    let fixed: Vec<CycNum> = reps
        .iter()
        .map(|(_, m)| {
            let mut k = i64::from(m[2] == 0);
            for x in 0..q {
                // (x : 1) is fixed when x(cx + d) = ax + b.
                if f.mul(x, f.mul(m[2], x) ^ m[3]) == f.mul(m[0], x) ^ m[1] {
                    k += 1;
                }
            }
            CycNum::from_int(k - 1)
        })
        .collect();
    rows.insert("St".to_string(), fixed);
    let b_order = (q * (q - 1)) as usize;
    for i in 1..=((q - 2) / 2) as i64 {
        let chi = |m: &Mat| (m[2] == 0).then(|| CycNum::zeta_pow(q - 1, i * log[&m[0]]));
        rows.insert(format!("R{i}"), induce(&chi, b_order));
    }
    let torus: HashMap<Mat, i64> = (0..=q).map(|k| (mpow(f, &s, k), k as i64)).collect();
    let gen = |m: &Mat| {
        (m[0] == 1 && m[2] == 0 && m[3] == 1)
            .then(|| CycNum::from_int(if f.trace(m[1]) == 0 { 1 } else { -1 }))
    };
    let whittaker = induce(&gen, q as usize);
    for j in 1..=(q / 2) as i64 {
        let beta = |m: &Mat| torus.get(m).map(|&k| CycNum::zeta_pow(q + 1, j * k));
        let ind = induce(&beta, (q + 1) as usize);
        rows.insert(
            format!("theta{j}"),
            whittaker.iter().zip(&ind).map(|(a, b)| a - b).collect(),
        );
    }

    let group_order = n as u64;
    BruteTable {
        q,
        group_order,
        classes: reps.iter().map(|(n, _)| n.clone()).collect(),
        centralizers: rep_classes
            .iter()
            .map(|&c| group_order / sizes[c] as u64)
            .collect(),
        rows,
    }
}

fn pow(f: Gf, x: u32, e: u32) -> u32 {
    (0..e).fold(1, |acc, _| f.mul(acc, x))
}

fn mpow(f: Gf, x: &Mat, e: u32) -> Mat {
    (0..e).fold(ID, |acc, _| mmul(f, &acc, x))
}

fn text(c: &CycNum) -> String {
    c.to_string()
}

/// `ζ_n^k + ζ_n^{-k}`.
fn trace_root(n: u32, k: i64) -> CycNum {
    &CycNum::zeta_pow(n, k) + &CycNum::zeta_pow(n, -k)
}

/// The closed-form table of SL₂(q), q even, with its Deligne–Lusztig data,
/// and `oracle` frozen alongside it.
pub fn sl2_fixture(oracle: &BruteTable) -> String {
    let q = oracle.q as i64;
    let name = format!("SL2({q})");
    let order = q * (q * q - 1);
    let mut classes = vec![
        json!({"name": "1", "centralizer": order.to_string(), "unipotent": true}),
        json!({"name": "u", "centralizer": q.to_string(), "unipotent": true}),
    ];
    let ls: Vec<i64> = (1..=(q - 2) / 2).collect();
    let ms: Vec<i64> = (1..=q / 2).collect();
    for l in &ls {
        classes.push(json!({"name": format!("a{l}"), "centralizer": (q - 1).to_string(), "semisimple": format!("a{l}")}));
    }
    for m in &ms {
        classes.push(json!({"name": format!("b{m}"), "centralizer": (q + 1).to_string(), "semisimple": format!("b{m}")}));
    }
    let names: Vec<String> = std::iter::once("1".to_string())
        .chain(std::iter::once("u".to_string()))
        .chain(ls.iter().map(|l| format!("a{l}")))
        .chain(ms.iter().map(|m| format!("b{m}")))
        .collect();
    let row = |vals: Vec<CycNum>| -> Value {
        Value::Object(
            names
                .iter()
                .cloned()
                .zip(vals.iter().map(|v| Value::String(text(v))))
                .collect(),
        )
    };
    let int = CycNum::from_int;
    let ds = |a: i64, b: i64, split: &dyn Fn(i64) -> CycNum, nonsplit: &dyn Fn(i64) -> CycNum| {
        let mut v = vec![int(a), int(b)];
        v.extend(ls.iter().map(|&l| split(l)));
        v.extend(ms.iter().map(|&m| nonsplit(m)));
        v
    };
    let qm = (q - 1) as u32;
    let qp = (q + 1) as u32;

    let mut characters = vec![
        json!({"group": name, "name": "1", "series": "1", "values": row(ds(1, 1, &|_| int(1), &|_| int(1)))}),
        json!({"group": name, "name": "St", "series": "1", "values": row(ds(q, 0, &|_| int(1), &|_| int(-1)))}),
    ];
    for i in &ls {
        let i = *i;
        characters.push(
            json!({"group": name, "name": format!("R{i}"), "series": format!("a{i}"),
            "values": row(ds(q + 1, 1, &|l| trace_root(qm, i * l), &|_| int(0)))}),
        );
    }
    for j in &ms {
        let j = *j;
        characters.push(
            json!({"group": name, "name": format!("theta{j}"), "series": format!("b{j}"),
            "values": row(ds(q - 1, -1, &|_| int(0), &|m| -trace_root(qp, j * m)))}),
        );
    }

    // Orbits of (T, θ): θ and θ^{-1} lie in one orbit, so every entry is its
    // own inverse.
    let mut entries = vec![json!({
        "label": "Ts,1", "torus_order": (q - 1).to_string(), "orbit_size": (q * (q + 1) / 2).to_string(),
        "values": row(ds(q + 1, 1, &|_| int(2), &|_| int(0))),
        "multiplicities": {"1": 1, "St": 1}
    })];
    for i in &ls {
        let i = *i;
        entries.push(json!({
            "label": format!("Ts,alpha^{i}"), "torus_order": (q - 1).to_string(), "orbit_size": (q * (q + 1)).to_string(),
            "values": row(ds(q + 1, 1, &|l| trace_root(qm, i * l), &|_| int(0))),
            "multiplicities": {format!("R{i}"): 1}
        }));
    }
    entries.push(json!({
        "label": "Tns,1", "torus_order": (q + 1).to_string(), "orbit_size": (q * (q - 1) / 2).to_string(),
        "values": row(ds(1 - q, 1, &|_| int(0), &|_| int(-2))),
        "multiplicities": {"1": 1, "St": -1}
    }));
    for j in &ms {
        let j = *j;
        entries.push(json!({
            "label": format!("Tns,beta^{j}"), "torus_order": (q + 1).to_string(), "orbit_size": (q * (q - 1)).to_string(),
            "values": row(ds(1 - q, 1, &|_| int(0), &|m| -trace_root(qp, j * m))),
            "multiplicities": {format!("theta{j}"): -1}
        }));
    }

    let oracle_rows: BTreeMap<String, Vec<String>> = oracle
        .rows
        .iter()
        .map(|(k, v)| (k.clone(), v.iter().map(text).collect()))
        .collect();
    let doc = json!({
        "format": "lietab/1",
        "groups": [{"name": name, "order": order.to_string(), "complete": true, "identity_class": "1", "classes": classes}],
        "characters": characters,
        "registries": [{"group": name, "torus_count": (q * q).to_string(), "entries": entries}],
        "oracles": [{"group": name, "q": q, "source": format!("brute force over GF({q})"),
                     "classes": oracle.classes, "rows": oracle_rows}]
    });
    ingest_str(&doc.to_string()).unwrap().to_json()
}
