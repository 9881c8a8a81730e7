"""Simulator configuration: schema, defaults, loading and validation.

Defaults mirror a 3GHz 8-core part with 32KB/256KB/16MB caches over a
single-channel pmem device (150ns read / 100ns write), a 512-entry
extended write-pending queue and a 256MiB log zone.
"""

from dataclasses import dataclass, field, fields as dc_fields

import yaml

from .errors import ParseError, ValidationError

LINE_BYTES = 64
TXID_BITS = 21
TXID_SPACE = 1 << TXID_BITS
EWPQ_ENTRY_BYTES = 8          # 1-bit state + 63 bits of truncated fields
LOG_ENTRY_BYTES = 80          # 64B data + 16B metadata, fixed on-media size
EMERGENCY_RECORD_BYTES = 80   # same packing as a log entry
PROFILE_ENTRY_BYTES = 4
DEVICE_BYTES = 1 << 39        # 512 GiB address range


@dataclass
class CacheLevelConfig:
    name: str
    capacity_bytes: int
    ways: int
    access_cycles: int
    transtag_ratio: float
    line_bytes: int = LINE_BYTES
    transtag_access_penalty: float = 0.30

    @property
    def sets(self):
        return self.capacity_bytes // (self.ways * self.line_bytes)

    @property
    def tags_per_set(self):
        return int(round(self.transtag_ratio * self.ways))


def _default_levels():
    return [
        CacheLevelConfig("L1D", 32 * 1024, 4, 2, 1.0),
        CacheLevelConfig("L2", 256 * 1024, 8, 8, 0.5),
        CacheLevelConfig("LLC", 16 * 1024 * 1024, 16, 30, 0.25),
    ]


@dataclass
class SimConfig:
    core_count: int = 8
    clock_ghz: float = 3.0
    cache_levels: list = field(default_factory=_default_levels)
    pmem_read_ns: int = 150
    pmem_write_ns: int = 100
    wpq_entries: int = 64
    ewpq_entries: int = 512
    ewpq_extension_factor: int = 10
    state_reset_cycles: int = 10
    state_reset_per_line_cycles: int = 0
    ewpq_search_cycles: int = 10
    migration_scan_period_instructions: int = 3_000_000
    gc_threshold: int = 1 << 20
    gc_chunk: int = 32
    log_zone_bytes: int = 256 * 1024 * 1024
    isolation_abort_on_conflict: bool = False
    rng_seed: int = 1
    # Event-accounting knobs (see timing notes in _core).
    cycles_per_instr: float = 0.5
    wpq_drain_divisor: int = 16
    fence_cycles: int = 30

    @property
    def log_zone_base(self):
        return DEVICE_BYTES - self.log_zone_bytes

    def level(self, name):
        for lv in self.cache_levels:
            if lv.name == name:
                return lv
        raise KeyError(name)


_POSITIVE_FIELDS = (
    "core_count", "pmem_read_ns", "pmem_write_ns", "wpq_entries",
    "ewpq_entries", "ewpq_extension_factor", "ewpq_search_cycles",
    "migration_scan_period_instructions", "gc_threshold", "gc_chunk",
    "log_zone_bytes", "wpq_drain_divisor",
)
_NONNEG_FIELDS = ("state_reset_cycles", "state_reset_per_line_cycles",
                  "fence_cycles")


def validate_config(cfg):
    """Raise ValidationError naming the first offending field."""
    for name in _POSITIVE_FIELDS:
        if int(getattr(cfg, name)) <= 0:
            raise ValidationError(name, "must be positive")
    for name in _NONNEG_FIELDS:
        if int(getattr(cfg, name)) < 0:
            raise ValidationError(name, "must be non-negative")
    if cfg.clock_ghz <= 0:
        raise ValidationError("clock_ghz", "must be positive")
    if cfg.cycles_per_instr < 0:
        raise ValidationError("cycles_per_instr", "must be non-negative")
    if not cfg.cache_levels or len(cfg.cache_levels) < 2:
        raise ValidationError("cache_levels", "need at least two levels")

    prev_cap = 0
    for i, lv in enumerate(cfg.cache_levels):
        where = f"cache_levels[{i}]"
        if lv.line_bytes != LINE_BYTES:
            raise ValidationError(f"{where}.line_bytes", "fixed at 64")
        if lv.ways <= 0 or lv.capacity_bytes <= 0 or lv.access_cycles <= 0:
            raise ValidationError(where, "counts must be positive")
        if lv.capacity_bytes % (lv.ways * lv.line_bytes):
            raise ValidationError(f"{where}.capacity_bytes",
                                  "not divisible by ways * line_bytes")
        sets = lv.sets
        if sets & (sets - 1):
            raise ValidationError(f"{where}.capacity_bytes",
                                  f"set count {sets} is not a power of two")
        if not 0.0 <= lv.transtag_ratio <= 1.0:
            raise ValidationError(f"{where}.transtag_ratio", "must be in [0,1]")
        if lv.transtag_access_penalty < 0:
            raise ValidationError(f"{where}.transtag_access_penalty",
                                  "must be non-negative")
        if lv.capacity_bytes < prev_cap:
            raise ValidationError(f"{where}.capacity_bytes",
                                  "capacities must be non-decreasing")
        prev_cap = lv.capacity_bytes

    # The eWPQ plus its extension bound how many valid log indices can be
    # live at once; the GC window on top of that must stay resolvable from
    # a 21-bit truncated log address.
    mappings = cfg.ewpq_entries * (1 + cfg.ewpq_extension_factor)
    if cfg.gc_threshold + cfg.gc_chunk + mappings >= TXID_SPACE:
        raise ValidationError("gc_threshold",
                              "GC window cannot exceed the 21-bit log index space")

    # Log zone layout must fit: profiles + extension + emergency + entries.
    layout = compute_log_layout(cfg)
    if layout["log_entry_capacity"] < cfg.gc_threshold + 2 * cfg.gc_chunk:
        raise ValidationError("log_zone_bytes",
                              "log zone too small for the GC window")
    return cfg


def emergency_capacity(cfg):
    """Records needed to dump every possible transactional line at once."""
    total = 0
    for i, lv in enumerate(cfg.cache_levels):
        per_cache = lv.tags_per_set * lv.sets
        shared = i == len(cfg.cache_levels) - 1
        total += per_cache * (1 if shared else cfg.core_count)
    return max(total, 1)


def compute_log_layout(cfg):
    """Byte offsets of the log-zone areas (relative to log_zone_base)."""
    off = 0
    layout = {"flag_off": off}
    off += 64                                # shutdown flag (padded)
    layout["registers_off"] = off
    off += 64                                # persisted head/tail registers
    layout["profile_off"] = off
    off += TXID_SPACE * PROFILE_ENTRY_BYTES
    layout["ewpq_snapshot_off"] = off
    off += cfg.ewpq_entries * EWPQ_ENTRY_BYTES
    layout["extension_off"] = off
    layout["extension_capacity"] = cfg.ewpq_entries * cfg.ewpq_extension_factor
    off += layout["extension_capacity"] * EWPQ_ENTRY_BYTES
    layout["emergency_off"] = off
    layout["emergency_capacity"] = emergency_capacity(cfg)
    off += layout["emergency_capacity"] * EMERGENCY_RECORD_BYTES
    layout["log_entry_off"] = off
    remaining = cfg.log_zone_bytes - off
    if remaining <= 0:
        raise ValidationError("log_zone_bytes", "smaller than its fixed areas")
    layout["log_entry_capacity"] = remaining // LOG_ENTRY_BYTES
    return layout


_SCALAR_FIELDS = {f.name: f.type for f in dc_fields(SimConfig)
                  if f.name != "cache_levels"}
_LEVEL_FIELDS = {f.name for f in dc_fields(CacheLevelConfig)}
_BOOL_FIELDS = {"isolation_abort_on_conflict"}
_FLOAT_FIELDS = {"clock_ghz", "cycles_per_instr"}


def _coerce_scalar(name, value):
    if name in _BOOL_FIELDS:
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ("true", "false", "1", "0"):
            return value.lower() in ("true", "1")
        raise ValidationError(name, f"expected a boolean, got {value!r}")
    if name in _FLOAT_FIELDS:
        try:
            return float(value)
        except (TypeError, ValueError):
            raise ValidationError(name, f"expected a number, got {value!r}")
    try:
        iv = int(value)
    except (TypeError, ValueError):
        raise ValidationError(name, f"expected an integer, got {value!r}")
    if not isinstance(value, bool) and isinstance(value, float) and value != iv:
        raise ValidationError(name, f"expected an integer, got {value!r}")
    return iv


def _parse_level(i, entry):
    if not isinstance(entry, dict):
        raise ValidationError(f"cache_levels[{i}]", "expected a mapping")
    unknown = set(entry) - _LEVEL_FIELDS
    if unknown:
        raise ValidationError(f"cache_levels[{i}].{sorted(unknown)[0]}",
                              "unknown key")
    merged = {}
    defaults = _default_levels()
    base = defaults[i] if i < len(defaults) else None
    for f in _LEVEL_FIELDS:
        if f in entry:
            merged[f] = entry[f]
        elif base is not None:
            merged[f] = getattr(base, f)
        else:
            raise ValidationError(f"cache_levels[{i}].{f}", "missing")
    merged["capacity_bytes"] = int(merged["capacity_bytes"])
    merged["ways"] = int(merged["ways"])
    merged["access_cycles"] = int(merged["access_cycles"])
    merged["line_bytes"] = int(merged["line_bytes"])
    merged["transtag_ratio"] = float(merged["transtag_ratio"])
    merged["transtag_access_penalty"] = float(merged["transtag_access_penalty"])
    merged["name"] = str(merged["name"])
    return CacheLevelConfig(**merged)


def load_config(source=None):
    """Build a validated SimConfig from a YAML document, dict, or None.

    Unknown keys are rejected. An empty document yields all defaults.
    """
    if source is None:
        data = {}
    elif isinstance(source, dict):
        data = dict(source)
    else:
        try:
            data = yaml.safe_load(source)
        except yaml.YAMLError as e:
            raise ParseError(str(e))
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ParseError("top-level document must be a mapping")

    cfg = SimConfig()
    for key, value in data.items():
        if key == "cache_levels":
            if not isinstance(value, list):
                raise ValidationError("cache_levels", "expected a list")
            cfg.cache_levels = [_parse_level(i, e) for i, e in enumerate(value)]
        elif key in _SCALAR_FIELDS:
            setattr(cfg, key, _coerce_scalar(key, value))
        else:
            raise ValidationError(key, "unknown key")
    return validate_config(cfg)


def apply_overrides(cfg, pairs):
    """Apply CLI --set key=value overrides (dotted paths) and re-validate."""
    for pair in pairs:
        if "=" not in pair:
            raise ValidationError(pair, "expected key=value")
        key, value = pair.split("=", 1)
        parts = key.split(".")
        if parts[0] == "cache_levels":
            if len(parts) != 3:
                raise ValidationError(key, "expected cache_levels.<i>.<field>")
            try:
                idx = int(parts[1])
                lv = cfg.cache_levels[idx]
            except (ValueError, IndexError):
                raise ValidationError(key, "no such cache level")
            if parts[2] not in _LEVEL_FIELDS:
                raise ValidationError(key, "unknown level field")
            cur = getattr(lv, parts[2])
            setattr(lv, parts[2],
                    type(cur)(value) if not isinstance(cur, str) else value)
        elif parts[0] in _SCALAR_FIELDS and len(parts) == 1:
            setattr(cfg, parts[0], _coerce_scalar(parts[0], value))
        else:
            raise ValidationError(key, "unknown key")
    return validate_config(cfg)


def scaled_down_config(cfg=None, factor=8):
    """Shrink every cache level's capacity by `factor` (stress testing)."""
    cfg = cfg or SimConfig()
    for lv in cfg.cache_levels:
        lv.capacity_bytes //= factor
    return validate_config(cfg)


def config_as_dict(cfg):
    return {
        **{name: getattr(cfg, name) for name in sorted(_SCALAR_FIELDS)},
        "cache_levels": [
            {f: getattr(lv, f) for f in sorted(_LEVEL_FIELDS)}
            for lv in cfg.cache_levels
        ],
    }
