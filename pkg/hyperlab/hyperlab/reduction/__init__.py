from hyperlab.hyperlab.reduction.reduction import (
    Packing,
    PackingGame,
    PolarGridMenu,
    angular_pitch,
    build_game,
    pack_circle,
    verify_separation,
)
