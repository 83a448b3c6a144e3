//! Acceptance: format stability. Bitset files round-trip bit-for-bit on
//! randomized sets, the sieved file for a fixed input matches a committed
//! byte-level golden, and the JSON reports for the pinned example commands
//! match committed goldens (metadata stripped; it carries wall time).
//!
//! Regenerate goldens with `UPDATE_GOLDENS=1 cargo test -p zaremba-cli`.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::Command;
use zaremba_cli::bitset_file;
use zaremba_core::ContinuantSet;

struct SplitMix64(u64);

impl SplitMix64 {
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn zaremba(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_zaremba"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out.stdout
}

/// Payload of a report: the JSON minus the volatile metadata block and any
/// filesystem path.
fn payload(stdout: &[u8]) -> Value {
    let mut v: Value = serde_json::from_slice(stdout).expect("stdout is JSON");
    let obj = v.as_object_mut().unwrap();
    obj.remove("meta");
    obj.remove("path");
    v
}

fn check_golden(name: &str, actual: &Value) {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(actual).unwrap()).unwrap();
        return;
    }
    let want: Value = serde_json::from_slice(&std::fs::read(&path).unwrap_or_else(|_| {
        panic!("missing golden {name}; run with UPDATE_GOLDENS=1 to create it")
    }))
    .unwrap();
    assert_eq!(actual, &want, "golden mismatch for {name}");
}

#[test]
fn acceptance_9_bitset_roundtrip_randomized() {
    let mut rng = SplitMix64(0x0009_f00d_2024);
    for case in 0..50 {
        let limit = 1 + rng.next_u64() % 400;
        let a_max = 1 + rng.next_u64() % 9;
        let mut words: Vec<u64> = (0..ContinuantSet::word_count(limit))
            .map(|_| rng.next_u64())
            .collect();
        words[0] = (words[0] | 2) & !1; // bit 1 set, bit 0 clear
        let tail_mask = match limit % 64 {
            63 => !0u64,
            r => (1u64 << (r + 1)) - 1,
        };
        let last = words.len() - 1;
        words[last] &= tail_mask;
        if last == 0 {
            words[0] = (words[0] | 2) & !1;
        }
        let set = ContinuantSet::from_words(a_max, limit, words).unwrap();
        let bytes = bitset_file::to_bytes(&set);
        let back = bitset_file::from_bytes(&bytes).unwrap();
        assert_eq!(back, set, "round trip failed on case {case}");
        assert_eq!(
            bitset_file::to_bytes(&back),
            bytes,
            "write not deterministic"
        );
    }
    println!(
        "acceptance 9 PASS (round trip): 50 randomized bitsets survive write/read bit-for-bit"
    );
}

#[test]
fn acceptance_9_sieve_file_matches_byte_golden() {
    let tmp = std::env::temp_dir().join(format!("zaremba-golden-{}.zbs", std::process::id()));
    let stdout = zaremba(&[
        "sieve",
        "--A",
        "1",
        "--N",
        "100",
        "--bitset-out",
        tmp.to_str().unwrap(),
    ]);
    check_golden("sieve_a1_n100.json", &payload(&stdout));

    let bytes = std::fs::read(&tmp).unwrap();
    std::fs::remove_file(&tmp).ok();
    let golden_path = golden_dir().join("fib_a1_n100.zbs");
    if std::env::var_os("UPDATE_GOLDENS").is_some() {
        std::fs::write(&golden_path, &bytes).unwrap();
        return;
    }
    let want = std::fs::read(&golden_path).expect("committed golden bitset");
    assert_eq!(bytes, want, "bitset file bytes drifted from the golden");
    println!("acceptance 9 PASS (byte golden): sieve output identical to committed .zbs");
}

#[test]
fn acceptance_9_json_goldens_small_sets() {
    let stdout = zaremba(&["exceptions", "--A", "2", "--N", "10"]);
    check_golden("exceptions_a2_n10.json", &payload(&stdout));

    let stdout = zaremba(&["expsum", "--A", "2", "--N", "10", "--theta", "1/2"]);
    check_golden("expsum_a2_n10_half.json", &payload(&stdout));
    println!("acceptance 9 PASS (small-set goldens)");
}

#[test]
fn acceptance_9_json_goldens_power_checks() {
    let stdout = zaremba(&["nieder", "--base", "2", "--max-exp", "20", "--A", "3"]);
    let twos = payload(&stdout);
    assert_eq!(twos["failures"], 0);
    check_golden("nieder_b2_e20_a3.json", &twos);

    let stdout = zaremba(&["nieder", "--base", "3", "--max-exp", "12", "--A", "3"]);
    let threes = payload(&stdout);
    assert_eq!(threes["failures"], 0);
    check_golden("nieder_b3_e12_a3.json", &threes);
    println!("acceptance 9 PASS (power-check goldens)");
}
