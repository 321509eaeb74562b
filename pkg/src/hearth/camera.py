"""Agent-mounted camera: pose, basis vectors, and frustum parameters.

Yaw and pitch are quantized to the simulator's 90/30 degree grids, so the
basis vectors come from the exact trig table and are bit-identical on
every host. Horizontal FOV is fixed at 90 degrees; the vertical FOV
follows from the aspect ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import Vec3, cos_deg, sin_deg

EYE_HEIGHT = 1.575
DEFAULT_WIDTH = 300
DEFAULT_HEIGHT = 300
NEAR_PLANE = 0.01


@dataclass(frozen=True, slots=True)
class Camera:
    position: Vec3
    yaw: int
    pitch: int  # camera horizon, degrees; positive looks down
    width: int = DEFAULT_WIDTH
    height: int = DEFAULT_HEIGHT

    def basis(self) -> tuple[Vec3, Vec3, Vec3]:
        """(forward, right, up) unit vectors."""
        sy, cy = sin_deg(self.yaw), cos_deg(self.yaw)
        sp, cp = sin_deg(self.pitch), cos_deg(self.pitch)
        forward = Vec3(sy * cp, -sp, cy * cp)
        right = Vec3(cy, 0.0, -sy)
        up = forward.cross(right)
        return forward, right, up

    @property
    def tan_half_hfov(self) -> float:
        return 1.0  # 90 degree horizontal FOV

    @property
    def tan_half_vfov(self) -> float:
        return self.height / self.width


def camera_for_agent(agent, width: int = DEFAULT_WIDTH, height: int = DEFAULT_HEIGHT) -> Camera:
    p = agent.position
    return Camera(
        position=Vec3(p.x, p.y + EYE_HEIGHT, p.z),
        yaw=agent.rotation_yaw,
        pitch=agent.camera_horizon,
        width=width,
        height=height,
    )
