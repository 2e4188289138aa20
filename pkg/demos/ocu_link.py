"""
Operator link over a lossy channel: codec, safety gate and watchdog.
"""

from karokit import ocu

d = ocu.CommandDatagram(1, ocu.Mode.DRIVE, (0.5, -0.25), arm=True)
frame = ocu.encode(d)
print(f"{len(frame)} byte frame: {frame.hex()}")
assert ocu.decode(frame) == d

# flip one bit and the checksum catches it
bad = bytearray(frame)
bad[9] ^= 0x04
try:
    ocu.decode(bytes(bad))
except ocu.FrameError as exc:
    print("corrupted frame:", type(exc).__name__)

# heartbeats every 100 ms through a link dropping 30% of frames
for seed in range(3):
    res = ocu.simulate(ocu.LinkModel(latency=20, jitter=10, drop_probability=0.3, seed=seed),
                       ocu.heartbeat_commands(5000), initially_armed=True, log=False)
    print(f"seed {seed}: {res.delivered}/{res.sent} delivered, stop-all on {res.stop_rate:.4%} of ticks")
# latency lands each heartbeat just after its own tick, so five straight drops
# (not six) leave the last accepted frame more than 500 ms old
print(f"five straight drops happen with probability {0.3 ** 5:.4%}")
