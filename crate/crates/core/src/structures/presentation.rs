use super::StructureError;
use crate::DEFAULT_STEP_BUDGET;

/// Step counter shared by the operations of one call.
#[derive(Clone, Debug)]
pub struct Fuel {
    limit: u64,
    used: u64,
}

impl Fuel {
    pub fn new(limit: u64) -> Self {
        Fuel { limit, used: 0 }
    }

    pub fn spend(&mut self, steps: u64) -> Result<(), StructureError> {
        self.used = self.used.saturating_add(steps);
        if self.used > self.limit {
            Err(StructureError::Budget(self.limit))
        } else {
            Ok(())
        }
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel::new(DEFAULT_STEP_BUDGET)
    }
}

/// A simply infinite system given by computable operations on `u64`
/// elements. Arithmetic is optional.
pub trait Presentation: Send + Sync {
    fn id(&self) -> String;
    fn base(&self, fuel: &mut Fuel) -> Result<u64, StructureError>;
    fn succ(&self, x: u64, fuel: &mut Fuel) -> Result<u64, StructureError>;
    fn contains(&self, x: u64) -> bool;

    fn has_arithmetic(&self) -> bool {
        false
    }
    fn one(&self, _fuel: &mut Fuel) -> Result<u64, StructureError> {
        Err(StructureError::Unsupported(self.id(), "1"))
    }
    fn add(&self, _x: u64, _y: u64, _fuel: &mut Fuel) -> Result<u64, StructureError> {
        Err(StructureError::Unsupported(self.id(), "+"))
    }
    fn mul(&self, _x: u64, _y: u64, _fuel: &mut Fuel) -> Result<u64, StructureError> {
        Err(StructureError::Unsupported(self.id(), "*"))
    }
}

fn overflow(id: String) -> StructureError {
    StructureError::Unsupported(id, "value in range (u64 overflow)")
}

/// `(ℕ, 0, S, 1, +, ·)`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Standard;

impl Presentation for Standard {
    fn id(&self) -> String {
        "standard".into()
    }
    fn base(&self, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        Ok(0)
    }
    fn succ(&self, x: u64, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        x.checked_add(1).ok_or_else(|| overflow(self.id()))
    }
    fn contains(&self, _x: u64) -> bool {
        true
    }
    fn has_arithmetic(&self) -> bool {
        true
    }
    fn one(&self, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        Ok(1)
    }
    fn add(&self, x: u64, y: u64, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        x.checked_add(y).ok_or_else(|| overflow(self.id()))
    }
    fn mul(&self, x: u64, y: u64, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        x.checked_mul(y).ok_or_else(|| overflow(self.id()))
    }
}

/// The element with code `d` is `m·d`: base 0, successor `+m`, `x +′ y = x+y`,
/// `x ·′ y = xy/m`. `Scaled(2)` is the evens presentation.
#[derive(Clone, Copy, Debug)]
pub struct Scaled(pub u64);

impl Presentation for Scaled {
    fn id(&self) -> String {
        if self.0 == 2 {
            "evens".into()
        } else {
            format!("scaled({})", self.0)
        }
    }
    fn base(&self, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        Ok(0)
    }
    fn succ(&self, x: u64, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        x.checked_add(self.0).ok_or_else(|| overflow(self.id()))
    }
    fn contains(&self, x: u64) -> bool {
        x.is_multiple_of(self.0)
    }
    fn has_arithmetic(&self) -> bool {
        true
    }
    fn one(&self, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        Ok(self.0)
    }
    fn add(&self, x: u64, y: u64, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        x.checked_add(y).ok_or_else(|| overflow(self.id()))
    }
    fn mul(&self, x: u64, y: u64, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        x.checked_mul(y).map(|p| p / self.0).ok_or_else(|| overflow(self.id()))
    }
}

/// Base `k`, successor `+1`, carrier `x ≥ k`. Successor only.
#[derive(Clone, Copy, Debug)]
pub struct Offset(pub u64);

impl Presentation for Offset {
    fn id(&self) -> String {
        format!("offset({})", self.0)
    }
    fn base(&self, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        Ok(self.0)
    }
    fn succ(&self, x: u64, fuel: &mut Fuel) -> Result<u64, StructureError> {
        fuel.spend(1)?;
        x.checked_add(1).ok_or_else(|| overflow(self.id()))
    }
    fn contains(&self, x: u64) -> bool {
        x >= self.0
    }
}

pub const PRESET_IDS: &[&str] = &["standard", "evens", "offset(k)"];

/// Parses a preset id: `standard`, `evens`, `offset(k)` (also `offset:k`),
/// `scaled(m)` with `m ≥ 1`.
pub fn preset(id: &str) -> Result<Box<dyn Presentation>, StructureError> {
    let bad = || StructureError::UnknownPresentation(id.to_string());
    let param = |prefix: &str| -> Option<Result<u64, StructureError>> {
        let rest = id.strip_prefix(prefix)?;
        let inner = rest
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| rest.strip_prefix(':'))?;
        Some(inner.trim().parse::<u64>().map_err(|_| bad()))
    };
    match id {
        "standard" => return Ok(Box::new(Standard)),
        "evens" => return Ok(Box::new(Scaled(2))),
        _ => {}
    }
    if let Some(k) = param("offset") {
        return Ok(Box::new(Offset(k?)));
    }
    if let Some(m) = param("scaled") {
        let m = m?;
        if m == 0 {
            return Err(bad());
        }
        return Ok(Box::new(Scaled(m)));
    }
    Err(bad())
}
