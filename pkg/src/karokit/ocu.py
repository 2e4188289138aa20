"""Simulated teleoperation command link: frame codec, safety gate, watchdog,
and a lossy channel over a simulated millisecond clock.

Frame layout (little-endian, 10 + 2n bytes)::

    offset  size  field
    0       1     version (1)
    1       1     mode: 0 drive, 1 flipper, 2 manipulator
    2       1     flags: bit 0 = arm, other bits must be zero
    3       1     n, number of axes (0..32)
    4       4     sequence, u32
    8       2n    axes, i16 each, value = round(axis * 32767)
    8+2n    2     CRC-16/CCITT (poly 0x1021, init 0xFFFF) over bytes [0, 8+2n)

Axes are quantized on construction so a datagram compares equal to its
decoded copy.
"""

from __future__ import annotations

import binascii
import struct
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Sequence

import numpy as np

VERSION = 1
AXIS_SCALE = 32767
MAX_AXES = 32
HEADER = struct.Struct("<BBBBI")
CRC = struct.Struct("<H")
MIN_FRAME = HEADER.size + CRC.size


class Mode(IntEnum):
    DRIVE = 0
    FLIPPER = 1
    MANIPULATOR = 2


class FrameError(ValueError):
    """Frame cannot be decoded."""


class ChecksumError(FrameError):
    pass


class TruncatedFrameError(FrameError):
    pass


def _quantize(v: float) -> float:
    return int(round(v * AXIS_SCALE)) / AXIS_SCALE


@dataclass(frozen=True)
class CommandDatagram:
    sequence: int
    mode: Mode = Mode.DRIVE
    axes: tuple[float, ...] = ()
    arm: bool = False

    def __post_init__(self):
        if not 0 <= self.sequence <= 0xFFFFFFFF:
            raise ValueError("sequence must fit in u32")
        object.__setattr__(self, "mode", Mode(self.mode))
        axes = tuple(float(a) for a in self.axes)
        if len(axes) > MAX_AXES:
            raise ValueError(f"at most {MAX_AXES} axes")
        if any(not -1.0 <= a <= 1.0 for a in axes):
            raise ValueError("axes must lie in [-1, 1]")
        object.__setattr__(self, "axes", tuple(_quantize(a) for a in axes))


def crc16(data: bytes) -> int:
    return binascii.crc_hqx(data, 0xFFFF)


def encode(d: CommandDatagram) -> bytes:
    body = HEADER.pack(VERSION, int(d.mode), 1 if d.arm else 0, len(d.axes), d.sequence)
    body += struct.pack(f"<{len(d.axes)}h", *(int(round(a * AXIS_SCALE)) for a in d.axes))
    return body + CRC.pack(crc16(body))


def decode(frame: bytes) -> CommandDatagram:
    """Parse a frame; the checksum is verified before any field is trusted."""
    frame = bytes(frame)
    if len(frame) < MIN_FRAME:
        raise TruncatedFrameError(f"frame of {len(frame)} bytes is shorter than {MIN_FRAME}")
    n = frame[3]
    expected = MIN_FRAME + 2 * n
    if len(frame) != expected:
        if len(frame) < expected:
            raise TruncatedFrameError(f"frame of {len(frame)} bytes, header implies {expected}")
        raise FrameError(f"frame of {len(frame)} bytes, header implies {expected}")
    body, (crc,) = frame[:-2], CRC.unpack(frame[-2:])
    if crc16(body) != crc:
        raise ChecksumError("checksum mismatch")
    version, mode, flags, n, seq = HEADER.unpack_from(body)
    if version != VERSION:
        raise FrameError(f"unsupported version {version}")
    if mode not in Mode._value2member_map_:
        raise FrameError(f"unknown mode {mode}")
    if flags & ~1 or n > MAX_AXES:
        raise FrameError("reserved flag bits set or too many axes")
    raw = struct.unpack_from(f"<{n}h", body, HEADER.size)
    if any(r < -AXIS_SCALE for r in raw):
        raise FrameError("axis value out of range")
    return CommandDatagram(seq, Mode(mode), tuple(r / AXIS_SCALE for r in raw), bool(flags & 1))


# --------------------------------------------------------------------------
# safety gate


@dataclass
class SafetyState:
    armed: bool = False
    last_command_time: float = 0.0  # ms
    heartbeat_timeout: float = 500.0  # ms
    last_sequence: int = -1
    stopped: bool = False

    def __post_init__(self):
        if not self.heartbeat_timeout > 0:
            raise ValueError("heartbeat timeout must be positive")


@dataclass(frozen=True)
class GateResult:
    accepted: bool
    reason: str  # accepted | unarmed | stale | arm-transition
    mode: Mode
    axes: tuple[float, ...]


def gate_command(state: SafetyState, d: CommandDatagram, now: float) -> GateResult:
    """Pass motion through only when armed; update ``state`` in place.

    A disarm request always takes effect, even when stale, so the operator
    can never be locked out of stopping the robot.  Stale sequence numbers
    are otherwise ignored entirely.  An arm transition changes state but its
    own axes are not forwarded.
    """
    zero = tuple(0.0 for _ in d.axes)
    if not d.arm and state.armed:
        state.armed = False
        if d.sequence > state.last_sequence:
            state.last_sequence = d.sequence
            state.last_command_time = now
        return GateResult(False, "arm-transition", d.mode, zero)
    if d.sequence <= state.last_sequence:
        return GateResult(False, "stale", d.mode, zero)
    state.last_sequence = d.sequence
    state.last_command_time = now
    if d.arm and not state.armed:
        state.armed = True
        return GateResult(False, "arm-transition", d.mode, zero)
    if not state.armed:
        return GateResult(False, "unarmed", d.mode, zero)
    state.stopped = False
    return GateResult(True, "accepted", d.mode, d.axes)


def watchdog_check(state: SafetyState, now: float) -> bool:
    """True (stop-all) iff the last accepted frame is older than the timeout.

    Stop-all latches: motion stays zero until a fresh armed command is gated.
    """
    if now - state.last_command_time > state.heartbeat_timeout:
        state.stopped = True
    return state.stopped


# --------------------------------------------------------------------------
# lossy channel


@dataclass(frozen=True)
class LinkModel:
    latency: float = 0.0  # ms
    jitter: float = 0.0  # ms, uniform in [0, jitter)
    drop_probability: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.drop_probability <= 1.0:
            raise ValueError("drop probability must lie in [0, 1]")
        if self.latency < 0 or self.jitter < 0:
            raise ValueError("latency and jitter must be nonnegative")


@dataclass(frozen=True)
class TimedFrame:
    time: float  # ms
    data: bytes


def link_deliver(model: LinkModel, frames: Sequence[TimedFrame]) -> list[TimedFrame]:
    """Drop and delay frames; the result is sorted by arrival time.

    One drop draw and one jitter draw per frame regardless of outcome, so a
    given seed fixes the fate of frame ``i`` independent of the others.
    """
    times = np.array([f.time for f in frames], dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValueError("frames must be time-ordered")
    rng = np.random.default_rng(model.seed)
    n = len(frames)
    drop = rng.random(n) < model.drop_probability
    delay = model.latency + model.jitter * rng.random(n)
    arrival = times + delay
    keep = np.flatnonzero(~drop)
    order = keep[np.argsort(arrival[keep], kind="stable")]
    return [TimedFrame(float(arrival[i]), frames[i].data) for i in order]


# --------------------------------------------------------------------------
# event loop


@dataclass
class SimEvent:
    time: float
    kind: str  # gate | watchdog | reject
    sequence: int | None = None
    reason: str = ""
    axes: tuple[float, ...] = ()

    def as_dict(self) -> dict:
        out = {"time_ms": round(self.time, 6), "kind": self.kind, "reason": self.reason}
        if self.sequence is not None:
            out["sequence"] = self.sequence
        if self.axes:
            out["axes"] = list(self.axes)
        return out


@dataclass
class SimResult:
    events: list[SimEvent] = field(default_factory=list)
    sent: int = 0
    delivered: int = 0
    accepted: int = 0
    watchdog_ticks: int = 0
    stop_ticks: int = 0

    @property
    def stop_rate(self) -> float:
        return self.stop_ticks / self.watchdog_ticks if self.watchdog_ticks else 0.0

    def summary(self) -> dict:
        return {"sent": self.sent, "delivered": self.delivered, "accepted": self.accepted,
                "watchdog_ticks": self.watchdog_ticks, "stop_ticks": self.stop_ticks,
                "stop_rate": self.stop_rate}


def simulate(model: LinkModel, commands: Iterable[tuple[float, CommandDatagram]],
             heartbeat_timeout: float = 500.0, tick: float = 100.0,
             duration: float | None = None, initially_armed: bool = False,
             log: bool = True) -> SimResult:
    """Send timed commands through the link and run the gate and watchdog.

    The watchdog runs every ``tick`` ms.  Deliveries at the same instant as a
    tick are processed before the tick.
    """
    commands = list(commands)
    frames = [TimedFrame(t, encode(d)) for t, d in commands]
    delivered = link_deliver(model, frames)
    state = SafetyState(armed=initially_armed, heartbeat_timeout=heartbeat_timeout)
    end = duration if duration is not None else (commands[-1][0] if commands else 0.0)
    res = SimResult(sent=len(frames), delivered=len(delivered))
    ticks = np.arange(1, int(end // tick) + 1) * tick
    i = 0
    for now in list(ticks) + [np.inf]:
        while i < len(delivered) and delivered[i].time <= now:
            f = delivered[i]
            i += 1
            try:
                d = decode(f.data)
            except FrameError as exc:
                if log:
                    res.events.append(SimEvent(f.time, "reject", None, type(exc).__name__))
                continue
            g = gate_command(state, d, f.time)
            res.accepted += g.accepted
            if log:
                res.events.append(SimEvent(f.time, "gate", d.sequence, g.reason, g.axes))
        if now == np.inf:
            break
        stop = watchdog_check(state, float(now))
        res.watchdog_ticks += 1
        res.stop_ticks += stop
        if stop and log:
            res.events.append(SimEvent(float(now), "watchdog", None, "stop-all"))
    return res


def heartbeat_commands(n: int, period: float = 100.0, axes: Sequence[float] = (0.5, 0.0),
                       mode: Mode = Mode.DRIVE) -> list[tuple[float, CommandDatagram]]:
    """``n`` armed commands at a fixed period, sequence numbers from 1."""
    return [(i * period, CommandDatagram(i + 1, mode, tuple(axes), True)) for i in range(n)]
