"""Bill-of-materials build-up and comparison against commercial blueprints.

All currency arithmetic is exact: prices are Decimals quantised to whole
pence, totals are sums of subtotals, and nothing passes through binary
floating point.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from decimal import Decimal

from .catalog import RankedPair
from .errors import NonPositiveQuantityError

PENCE = Decimal("0.01")

DEFAULT_SWITCH_PRICE_GBP = Decimal("417")
DEFAULT_PORTS_PER_SWITCH = 24

# reference price for 100 m of UTP Cat6, offered as an optional extra line
CABLE_PER_100M_GBP = Decimal("60")


@dataclass(frozen=True)
class BomLine:
    description: str
    unit_price_gbp: Decimal
    quantity: int
    subtotal_gbp: Decimal


@dataclass(frozen=True)
class BillOfMaterials:
    lines: tuple[BomLine, ...]
    switch_count: int
    total_gbp: Decimal

    def to_json_dict(self) -> dict:
        return {
            "lines": [
                {
                    "description": line.description,
                    "unit_price_pence": int(line.unit_price_gbp * 100),
                    "unit_price": format_gbp(line.unit_price_gbp),
                    "quantity": line.quantity,
                    "subtotal_pence": int(line.subtotal_gbp * 100),
                    "subtotal": format_gbp(line.subtotal_gbp),
                }
                for line in self.lines
            ],
            "switch_count": self.switch_count,
            "total_pence": int(self.total_gbp * 100),
            "total": format_gbp(self.total_gbp),
        }

    def as_table(self) -> str:
        rows = [(line.description, str(line.quantity),
                 format_gbp(line.unit_price_gbp), format_gbp(line.subtotal_gbp))
                for line in self.lines]
        rows.append(("total", "", "", format_gbp(self.total_gbp)))
        headers = ("item", "qty", "unit", "subtotal")
        widths = [max(len(headers[k]), *(len(r[k]) for r in rows)) for k in range(4)]
        fmt = "  ".join(f"{{:<{w}}}" for w in widths)
        out = [fmt.format(*headers), fmt.format(*("-" * w for w in widths))]
        out += [fmt.format(*r) for r in rows]
        return "\n".join(out)


@dataclass(frozen=True)
class ReferenceBlueprint:
    name: str
    application: str
    equipment: str
    cost_low_gbp: Decimal
    cost_high_gbp: Decimal
    maturity: str

    def __post_init__(self):
        if self.cost_low_gbp > self.cost_high_gbp:
            raise ValueError(f"{self.name}: cost_low must not exceed cost_high")

    @property
    def midpoint_gbp(self) -> Decimal:
        return (self.cost_low_gbp + self.cost_high_gbp) / 2


@dataclass(frozen=True)
class BlueprintRow:
    name: str
    application: str
    equipment: str
    cost_gbp: Decimal
    maturity: str
    ratio_vs_plan: float | None


def format_gbp(amount: Decimal) -> str:
    quantised = amount.quantize(PENCE)
    if quantised == quantised.to_integral_value():
        return f"£{int(quantised):,}"
    return f"£{quantised:,.2f}"


def bill_of_materials(pair: RankedPair, camera_count: int,
                      ports_per_switch: int = DEFAULT_PORTS_PER_SWITCH,
                      switch_price_gbp: Decimal = DEFAULT_SWITCH_PRICE_GBP,
                      extras: tuple[tuple[str, Decimal, int], ...] = ()) -> BillOfMaterials:
    """Itemise cameras, lenses, and PoE switches for a placement.

    One switch port serves one camera; switch count is the ceiling of
    cameras over ports.  ``extras`` are (description, unit price, quantity)
    line items appended verbatim (cabling, mounts, ...).
    """
    if camera_count < 1:
        raise NonPositiveQuantityError(f"camera_count must be >= 1, got {camera_count}")
    if ports_per_switch < 1:
        raise NonPositiveQuantityError(f"ports_per_switch must be >= 1, got {ports_per_switch}")

    switch_count = math.ceil(camera_count / ports_per_switch)
    lines = [
        _line(f"{pair.camera.id} camera", pair.camera.price_gbp, camera_count),
        _line(f"{pair.lens.id} lens", pair.lens.price_gbp, camera_count),
    ]
    if switch_price_gbp > 0:
        lines.append(_line(f"PoE switch ({ports_per_switch} ports)",
                           switch_price_gbp, switch_count))
    for description, unit_price, quantity in extras:
        if quantity < 1:
            raise NonPositiveQuantityError(f"extra {description!r} quantity must be >= 1")
        lines.append(_line(description, Decimal(unit_price), quantity))

    total = sum((line.subtotal_gbp for line in lines), Decimal(0))
    return BillOfMaterials(lines=tuple(lines), switch_count=switch_count,
                           total_gbp=total.quantize(PENCE))


def _line(description: str, unit_price: Decimal, quantity: int) -> BomLine:
    unit = Decimal(unit_price)
    return BomLine(description=description, unit_price_gbp=unit,
                   quantity=quantity, subtotal_gbp=unit * quantity)


def load_reference_blueprints() -> list[ReferenceBlueprint]:
    from . import data

    raw = json.loads(data.read_text("blueprints.json"))
    return [
        ReferenceBlueprint(
            name=item["name"],
            application=item["application"],
            equipment=item["equipment"],
            cost_low_gbp=Decimal(item["cost_low_gbp"]),
            cost_high_gbp=Decimal(item["cost_high_gbp"]),
            maturity=item["maturity"],
        )
        for item in raw["blueprints"]
    ]


def compare_blueprints(bom: BillOfMaterials | None,
                       references: list[ReferenceBlueprint] | None = None,
                       plan_label: str = "Camera plan") -> list[BlueprintRow]:
    """The camera-system BOM beside the commercial reference blueprints.

    Ratios are plan cost over the reference midpoint; suppressed when there
    is no plan or the midpoint is zero.
    """
    if references is None:
        references = load_reference_blueprints()
    rows: list[BlueprintRow] = []
    if bom is not None:
        rows.append(BlueprintRow(
            name=plan_label, application="as planned",
            equipment=f"{bom.lines[0].quantity}x {bom.lines[0].description}"
                      f" + {bom.switch_count} PoE switch(es)",
            cost_gbp=bom.total_gbp, maturity="Low TRL", ratio_vs_plan=None,
        ))
    for ref in references:
        ratio = None
        if bom is not None and ref.midpoint_gbp != 0:
            ratio = float(bom.total_gbp / ref.midpoint_gbp)
        rows.append(BlueprintRow(
            name=ref.name, application=ref.application, equipment=ref.equipment,
            cost_gbp=ref.midpoint_gbp, maturity=ref.maturity, ratio_vs_plan=ratio,
        ))
    return rows


def comparison_table(rows: list[BlueprintRow]) -> str:
    headers = ("blueprint", "application", "cost (£k)", "maturity", "vs plan")
    body = []
    for row in rows:
        cost_k = f"{float(row.cost_gbp) / 1000.0:,.1f}"
        ratio = "" if row.ratio_vs_plan is None else f"{row.ratio_vs_plan:.3g}x"
        body.append((row.name, row.application, cost_k, row.maturity, ratio))
    widths = [max(len(headers[k]), *(len(r[k]) for r in body)) for k in range(5)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*headers), fmt.format(*("-" * w for w in widths))]
    out += [fmt.format(*r) for r in body]
    return "\n".join(out)
