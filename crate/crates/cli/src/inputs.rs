use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use dirough::grpd::{build_updir_groupoid, ChoiceMode, ChoiceStrategy};
use dirough::relsys::{derive_pawl_relation, parse_relation, InformationTable};
use dirough::{fixture, Groupoid, RelationalSystem};

use crate::cli::{GroupoidInput, RelationInput, StrategyArg};
use crate::UsageError;

pub struct Loaded {
    pub sys: RelationalSystem,
    pub fixture: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

/// The relational system named by `--rel`, `--table`, `--fixture` or a positional file.
pub fn relation(input: &RelationInput, positional: Option<&Path>) -> Result<Loaded> {
    match try_relation(input, positional)? {
        Some(l) => Ok(l),
        None => Err(UsageError("a relation is required: pass --rel, --table or --fixture".into()).into()),
    }
}

pub fn try_relation(input: &RelationInput, positional: Option<&Path>) -> Result<Option<Loaded>> {
    let given = [positional.is_some(), input.rel.is_some(), input.table.is_some(), input.fixture];
    if given.iter().filter(|&&g| g).count() > 1 {
        return Err(UsageError("give exactly one relation source".into()).into());
    }
    if input.fixture {
        return Ok(Some(Loaded {
            sys: fixture::relation(),
            fixture: true,
        }));
    }
    if let Some(path) = positional.or(input.rel.as_deref()) {
        let sys = parse_relation(&read(path)?).with_context(|| format!("in {}", path.display()))?;
        return Ok(Some(Loaded { sys, fixture: false }));
    }
    if let Some(path) = &input.table {
        let table = InformationTable::from_csv(read(path)?.as_bytes()).with_context(|| format!("in {}", path.display()))?;
        let attrs = input.attrs.clone().unwrap_or_else(|| table.attributes().to_vec());
        let sys = derive_pawl_relation(&table, &attrs)?;
        return Ok(Some(Loaded { sys, fixture: false }));
    }
    Ok(None)
}

pub fn strategy(sys: &RelationalSystem, gi: &GroupoidInput) -> Result<ChoiceStrategy> {
    let mode = match gi.strategy.as_ref().unwrap_or(&StrategyArg::Min) {
        StrategyArg::Min => ChoiceMode::MinIndex,
        StrategyArg::Max => ChoiceMode::MaxIndex,
        StrategyArg::Seed(s) => ChoiceMode::SeededRandom(*s),
        StrategyArg::Table(path) => {
            let g = Groupoid::from_csv(&read(path)?)
                .and_then(|g| g.aligned_to(sys))
                .with_context(|| format!("in {}", path.display()))?;
            ChoiceMode::Explicit(g.table().to_vec())
        }
    };
    Ok(if gi.pi {
        ChoiceStrategy::pi(mode)
    } else {
        ChoiceStrategy::new(mode)
    })
}

/// A member of `B(S)`; the embedded Cayley table for the fixture unless a strategy is given.
pub fn groupoid(loaded: &Loaded, gi: &GroupoidInput) -> Result<Groupoid> {
    if loaded.fixture && gi.strategy.is_none() && !gi.pi {
        return Ok(fixture::table2());
    }
    Ok(build_updir_groupoid(&loaded.sys, &strategy(&loaded.sys, gi)?)?)
}

/// The groupoid only when the flags ask for one.
pub fn optional_groupoid(loaded: &Loaded, gi: &GroupoidInput) -> Result<Option<Groupoid>> {
    if loaded.fixture || gi.strategy.is_some() || gi.pi {
        groupoid(loaded, gi).map(Some)
    } else {
        Ok(None)
    }
}
