//! The built-in desk-scale group corpus: every named-family group of order
//! at most 48, plus the frozen order-48 non-split extension.

use crate::error::Result;
use crate::group::PermGroup;
use crate::named::named_group;

/// Names of every built-in corpus group, in ascending order of group order.
pub fn corpus_names() -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for n in 1..=48u64 {
        names.push(format!("C{}", n));
    }
    for n in (6..=48u64).step_by(2) {
        names.push(format!("D{}", n));
    }
    for fixed in [
        "Q8",
        "Q16",
        "SD16",
        "S3",
        "S4",
        "A4",
        "SL(2,3)",
        "SmallGroup(48,33)",
        "C2xC2",
        "C2xC4",
        "C2xC2xC2",
        "C2xC2xC2xC2",
        "C3xC3",
        "C2xD8",
        "C3xQ8",
        "C2xC2xC3",
    ] {
        names.push(fixed.to_string());
    }
    // stable order: by group order, then name; orders of the named families
    // are readable off the descriptor
    names.sort_by_key(|n| (descriptor_order(n), n.clone()));
    names
}

/// Group order straight from a corpus descriptor, without building the group.
fn descriptor_order(name: &str) -> u64 {
    if name.contains('x') {
        return name.split('x').map(descriptor_order).product();
    }
    match name {
        "Q8" => 8,
        "Q16" | "SD16" => 16,
        "S3" => 6,
        "S4" | "SL(2,3)" => 24,
        "A4" => 12,
        "SmallGroup(48,33)" => 48,
        _ => {
            let n: u64 = name[1..].parse().expect("corpus descriptor");
            match name.as_bytes()[0] {
                b'C' | b'D' => n,
                _ => unreachable!("corpus descriptor"),
            }
        }
    }
}

/// Builds every corpus group of order at most `max_order`.
pub fn corpus(max_order: u64) -> Result<Vec<PermGroup>> {
    let mut out = Vec::new();
    for name in corpus_names() {
        if descriptor_order(&name) <= max_order {
            out.push(named_group(&name)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_match_descriptors() {
        for name in corpus_names() {
            let g = named_group(&name).unwrap();
            assert_eq!(g.order_u64(), descriptor_order(&name), "{}", name);
            assert!(g.order_u64() <= 48);
        }
    }

    #[test]
    fn filtering_and_contents() {
        let small = corpus(8).unwrap();
        let names: Vec<&str> = small.iter().map(|g| g.name().unwrap()).collect();
        assert!(names.contains(&"D8"));
        assert!(names.contains(&"Q8"));
        assert!(names.contains(&"C2xC2"));
        assert!(small.iter().all(|g| g.order_u64() <= 8));
        let full = corpus(48).unwrap();
        assert!(full.iter().any(|g| g.name() == Some("SmallGroup(48,33)")));
        assert_eq!(full.len(), corpus_names().len());
    }

    #[test]
    fn no_duplicate_names() {
        let names = corpus_names();
        let mut dedup = names.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), names.len());
    }
}
