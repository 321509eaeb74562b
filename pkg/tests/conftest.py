import pytest

from hearth.catalog import default_catalog
from hearth.geometry import Aabb, Vec3
from hearth.scene import AgentState, ObjectInstance, Scene
from hearth.scenegen import generate_scene


@pytest.fixture(scope="session")
def catalog():
    return default_catalog()


@pytest.fixture(scope="session")
def golden_scene():
    """Scene 17, the kitchen used as the main shared fixture."""
    return generate_scene(17)


def make_room(
    width: float = 6.0,
    depth: float = 6.0,
    scene_number: int = 1,
    category: str = "kitchen",
    agent_pos: Vec3 = Vec3(3.0, 0.0, 1.0),
    agent_yaw: int = 0,
) -> Scene:
    """Empty rectangular room for hand-built fixtures."""
    t = 0.1
    return Scene(
        scene_number=scene_number,
        room_category=category,
        floor_bounds=Aabb(Vec3(0.0, -0.1, 0.0), Vec3(width, 0.0, depth)),
        walls=[
            Aabb(Vec3(-t, 0.0, -t), Vec3(width + t, 2.5, 0.0)),
            Aabb(Vec3(width, 0.0, 0.0), Vec3(width + t, 2.5, depth)),
            Aabb(Vec3(-t, 0.0, depth), Vec3(width + t, 2.5, depth + t)),
            Aabb(Vec3(-t, 0.0, 0.0), Vec3(0.0, 2.5, depth)),
        ],
        objects=[],
        props=[],
        agent=AgentState(position=agent_pos, rotation_yaw=agent_yaw),
        seed=scene_number,
    )


def add_object(
    scene: Scene,
    category: str,
    object_id: str,
    position: Vec3,
    yaw: int = 0,
    variant: int = 0,
    **flags,
) -> ObjectInstance:
    inst = ObjectInstance(
        object_id=object_id,
        category=category,
        variant_index=variant,
        position=position,
        rotation_yaw=yaw,
    )
    for key, value in flags.items():
        setattr(inst, key, value)
    scene.objects.append(inst)
    return inst


def lamp_at_distance(distance: float, catalog) -> Scene:
    """Agent facing +z; a floor lamp whose nearest bounds point sits exactly
    ``distance`` from the agent center (the lamp spans the center height,
    so the distance is purely horizontal)."""
    scene = make_room()
    cls = catalog.get("FloorLamp")
    s = cls.variant_params[0].scale
    half_d = (cls.closed_extents.max.z - cls.closed_extents.min.z) / 2 * s
    add_object(scene, "FloorLamp", "FloorLamp_1", Vec3(3.0, 0.0, 1.0 + distance + half_d))
    return scene
