import math

import numpy as np
from django.test import SimpleTestCase

from app_semantic_retrieval.exceptions import ConfigError, DatasetError
from app_semantic_retrieval.geometry import EmbeddingVector
from app_semantic_retrieval.synthetic import (
    RANDOM,
    SyntheticDatasetSpec,
    composite_query,
    generate_clusters,
)


def cluster_means(points):
    labels = sorted({point.label for point in points})
    return {
        label: np.mean([p.values for p in points if p.label == label], axis=0)
        for label in labels
    }


class DatasetSpecTests(SimpleTestCase):
    def test_defaults(self):
        spec = SyntheticDatasetSpec()
        self.assertEqual((spec.num_points, spec.dim, spec.num_clusters), (200, 2, 5))

    def test_validation(self):
        with self.assertRaises(ConfigError):
            SyntheticDatasetSpec(num_points=3, num_clusters=4)
        with self.assertRaises(ConfigError):
            SyntheticDatasetSpec(cluster_std=0.0)
        with self.assertRaises(ConfigError):
            SyntheticDatasetSpec(separation=-1.0)
        with self.assertRaises(ConfigError):
            SyntheticDatasetSpec(layout="spiral")
        with self.assertRaises(ConfigError):
            SyntheticDatasetSpec(dim=1)


class GenerateClustersTests(SimpleTestCase):
    def test_deterministic(self):
        spec = SyntheticDatasetSpec(rng_seed=11)
        first, second = generate_clusters(spec), generate_clusters(spec)
        self.assertEqual([p.id for p in first], [p.id for p in second])
        for a, b in zip(first, second):
            np.testing.assert_array_equal(a.values, b.values)
            self.assertEqual(a.label, b.label)

        other = generate_clusters(SyntheticDatasetSpec(rng_seed=12))
        self.assertFalse(np.array_equal(first[0].values, other[0].values))

    def test_sizes_and_labels(self):
        points = generate_clusters(SyntheticDatasetSpec(num_points=23, num_clusters=5))
        self.assertEqual(len(points), 23)
        self.assertEqual(len({p.id for p in points}), 23)
        counts = [sum(1 for p in points if p.label == label) for label in range(5)]
        self.assertEqual(counts, [5, 5, 5, 4, 4])

    def test_single_cluster(self):
        points = generate_clusters(SyntheticDatasetSpec(num_points=10, num_clusters=1))
        self.assertEqual({p.label for p in points}, {0})

    def test_nearest_centroid_recovers_labels(self):
        spec = SyntheticDatasetSpec(cluster_std=0.1, separation=20.0, rng_seed=4)
        points = generate_clusters(spec)
        means = cluster_means(points)
        for point in points:
            nearest = min(means, key=lambda label: np.linalg.norm(point.values - means[label]))
            self.assertEqual(nearest, point.label)

    def test_ring_spacing(self):
        points = generate_clusters(SyntheticDatasetSpec(rng_seed=8))
        means = list(cluster_means(points).values())
        distances = sorted(
            np.linalg.norm(means[i] - means[j])
            for i in range(len(means))
            for j in range(i + 1, len(means))
        )
        # пять ближайших пар это соседи по кольцу
        for distance in distances[:5]:
            self.assertAlmostEqual(distance, 5.0, delta=0.5)

    def test_offset_moves_the_layout(self):
        points = generate_clusters(SyntheticDatasetSpec(offset=15.0, rng_seed=2))
        centre = np.mean([p.values for p in points], axis=0)
        np.testing.assert_allclose(centre, [15 / math.sqrt(2)] * 2, atol=0.3)

    def test_random_layout_keeps_separation(self):
        spec = SyntheticDatasetSpec(layout=RANDOM, dim=3, cluster_std=0.05, rng_seed=6)
        means = list(cluster_means(generate_clusters(spec)).values())
        for i in range(len(means)):
            for j in range(i + 1, len(means)):
                self.assertGreater(np.linalg.norm(means[i] - means[j]), 4.5)

    def test_random_layout_gives_up(self):
        spec = SyntheticDatasetSpec(
            num_points=1001, num_clusters=1001, layout=RANDOM, rng_seed=0
        )
        with self.assertRaises(DatasetError):
            generate_clusters(spec)


class CompositeQueryTests(SimpleTestCase):
    def test_singletons_give_exact_mean(self):
        points = [
            EmbeddingVector(id="a", values=[1.0, 2.0], label=0),
            EmbeddingVector(id="b", values=[3.0, 0.0], label=1),
            EmbeddingVector(id="c", values=[2.0, 4.0], label=2),
        ]
        query = composite_query(points, rng_seed=0)
        np.testing.assert_allclose(query.values, [2.0, 2.0])
        self.assertEqual(query.id, "query")

    def test_matches_independent_recomputation(self):
        points = generate_clusters(SyntheticDatasetSpec(rng_seed=3))
        query = composite_query(points, rng_seed=9)

        rng = np.random.default_rng(9)
        picks = []
        for label in range(5):
            members = [p for p in points if p.label == label]
            picks.append(members[rng.integers(len(members))].values)
        np.testing.assert_allclose(query.values, np.mean(picks, axis=0))

    def test_single_cluster_query(self):
        points = generate_clusters(SyntheticDatasetSpec(rng_seed=3))
        query = composite_query(points, rng_seed=1, clusters=[2])
        self.assertIn(
            tuple(query.values), {tuple(p.values) for p in points if p.label == 2}
        )

    def test_symmetric_pair_resamples_away_from_origin(self):
        points = [
            EmbeddingVector(id="a1", values=[1.0, 0.0], label=0),
            EmbeddingVector(id="a2", values=[0.0, 1.0], label=0),
            EmbeddingVector(id="b1", values=[-1.0, 0.0], label=1),
            EmbeddingVector(id="b2", values=[0.0, 1.0], label=1),
        ]
        for seed in range(10):
            self.assertGreater(composite_query(points, rng_seed=seed).norm, 0.0)

    def test_errors(self):
        with self.assertRaises(DatasetError):
            composite_query([EmbeddingVector(id="a", values=[1.0])], rng_seed=0)
        points = generate_clusters(SyntheticDatasetSpec(num_points=10, num_clusters=2))
        with self.assertRaises(DatasetError):
            composite_query(points, rng_seed=0, clusters=[7])
