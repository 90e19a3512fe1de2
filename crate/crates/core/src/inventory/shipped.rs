//! Inventories and rule tables bundled with the crate (see `data/`).

use super::{parse_inventory, parse_rules, LangCode, MappingRuleSet, ScriptInventory};
use crate::error::{Error, Result};

/// Source/dominant pairs that have a shipped rule table.
pub const PAIRS: [(LangCode, LangCode); 12] = [
    (LangCode::Mzn, LangCode::Fas),
    (LangCode::Azb, LangCode::Fas),
    (LangCode::Glk, LangCode::Fas),
    (LangCode::Kas, LangCode::Urd),
    (LangCode::Hac, LangCode::Ckb),
    (LangCode::Snd, LangCode::Urd),
    (LangCode::Ckb, LangCode::Fas),
    (LangCode::Kmr, LangCode::Fas),
    (LangCode::Hac, LangCode::Fas),
    (LangCode::Ckb, LangCode::Arb),
    (LangCode::Kmr, LangCode::Arb),
    (LangCode::Hac, LangCode::Arb),
];

macro_rules! data {
    ($dir:literal, $name:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/", $dir, "/", $name))
    };
}

fn inventory_text(lang: LangCode) -> &'static str {
    match lang {
        LangCode::Azb => data!("inventories", "azb.inv"),
        LangCode::Mzn => data!("inventories", "mzn.inv"),
        LangCode::Glk => data!("inventories", "glk.inv"),
        LangCode::Ckb => data!("inventories", "ckb.inv"),
        LangCode::Kmr => data!("inventories", "kmr.inv"),
        LangCode::Hac => data!("inventories", "hac.inv"),
        LangCode::Kas => data!("inventories", "kas.inv"),
        LangCode::Snd => data!("inventories", "snd.inv"),
        LangCode::Fas => data!("inventories", "fas.inv"),
        LangCode::Arb => data!("inventories", "arb.inv"),
        LangCode::Urd => data!("inventories", "urd.inv"),
    }
}

fn rules_text(src: LangCode, dom: LangCode) -> Option<&'static str> {
    use LangCode::*;
    Some(match (src, dom) {
        (Mzn, Fas) => data!("rules", "mzn_fas.rules"),
        (Azb, Fas) => data!("rules", "azb_fas.rules"),
        (Glk, Fas) => data!("rules", "glk_fas.rules"),
        (Kas, Urd) => data!("rules", "kas_urd.rules"),
        (Hac, Ckb) => data!("rules", "hac_ckb.rules"),
        (Snd, Urd) => data!("rules", "snd_urd.rules"),
        (Ckb, Fas) => data!("rules", "ckb_fas.rules"),
        (Kmr, Fas) => data!("rules", "kmr_fas.rules"),
        (Hac, Fas) => data!("rules", "hac_fas.rules"),
        (Ckb, Arb) => data!("rules", "ckb_arb.rules"),
        (Kmr, Arb) => data!("rules", "kmr_arb.rules"),
        (Hac, Arb) => data!("rules", "hac_arb.rules"),
        _ => return None,
    })
}

pub fn inventory(lang: LangCode) -> ScriptInventory {
    parse_inventory(inventory_text(lang), &format!("shipped:{lang}.inv")).expect("shipped inventory is valid")
}

pub fn rules(src: LangCode, dom: LangCode) -> Result<MappingRuleSet> {
    let text = rules_text(src, dom).ok_or_else(|| Error::Unknown {
        kind: "shipped rule table",
        name: format!("{src}_{dom}"),
    })?;
    parse_rules(text, &format!("shipped:{src}_{dom}.rules"), &inventory(src), &inventory(dom))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_shipped_table_compiles() {
        for lang in LangCode::ALL {
            assert_eq!(inventory(lang).lang(), lang);
        }
        for (src, dom) in PAIRS {
            let set = rules(src, dom).unwrap();
            assert!(!set.is_empty(), "{src}_{dom}");
        }
        assert!(rules(LangCode::Fas, LangCode::Arb).is_err());
    }

    #[test]
    fn zwnj_and_harakat_flags() {
        let uses: Vec<_> = LangCode::ALL.into_iter().filter(|l| inventory(*l).uses_zwnj()).collect();
        assert_eq!(
            uses,
            vec![LangCode::Azb, LangCode::Mzn, LangCode::Glk, LangCode::Fas, LangCode::Urd]
        );
        for lang in [LangCode::Ckb, LangCode::Kmr, LangCode::Hac] {
            assert!(inventory(lang).diacritics().is_empty());
        }
    }
}
