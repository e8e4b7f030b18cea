from django.core.exceptions import ValidationError
from django.db import IntegrityError
from django.test import TestCase

from .fixtures.layouts import karate_dot
from .models import ColoringRun, EdgeColor, Palette
from .pipeline import PipelineOptions, run_pipeline


class ModelTests(TestCase):
    def test_can_create_palette(self):
        p = Palette(name='traffic', colors='#FF0000\n  #ffff00\n\n#00ff00\n')

        p.full_clean()
        p.save()

        assert Palette.objects.filter(name='traffic').count() == 1
        p.refresh_from_db()
        self.assertEqual(p.colors, '#ff0000\n#ffff00\n#00ff00')
        self.assertEqual(p.rgb_colors()[1], (1.0, 1.0, 0.0))
        p.delete()

    def test_palette_rejects_bad_colors(self):
        for colors in ('#ff0000', '#ff0000\nred', ''):
            with self.subTest(colors=colors), self.assertRaises(ValidationError):
                Palette(name='bad', colors=colors).full_clean()

    def test_palette_names_are_unique(self):
        Palette.objects.create(name='duo', colors='#000000\n#ffffff')
        with self.assertRaises(IntegrityError):
            Palette.objects.create(name='duo', colors='#111111\n#eeeeee')

    def test_can_record_run(self):
        result = run_pipeline(PipelineOptions(random_starts=1, seed=2), text=karate_dot())
        run = ColoringRun(input_dot=karate_dot(), seed=2, random_starts=1)
        run.record(result)
        run.full_clean()
        run.save()

        run.refresh_from_db()
        self.assertEqual(run.edge_count, 78)
        self.assertEqual(run.node_count, 34)
        self.assertEqual(run.collision_count, result.report['collisions'])
        self.assertAlmostEqual(run.mindist, result.report['mindist'])
        self.assertEqual(set(run.timings), {'parse', 'collision', 'space', 'optimize', 'emit'})
        self.assertIn('color="#', run.output_dot)
        self.assertIn('78 edges', str(run))

    def test_edge_colors_unique_per_run(self):
        run = ColoringRun.objects.create(input_dot='graph{}')
        e = EdgeColor(run=run, edge_index=0, source='a', target='b', color='#00ff00')
        e.full_clean()
        e.save()
        self.assertEqual(str(e), 'a -- b: #00ff00')
        with self.assertRaises(IntegrityError):
            EdgeColor.objects.create(run=run, edge_index=0, source='a', target='b', color='#000000')

    def test_edge_color_must_be_hex(self):
        run = ColoringRun.objects.create(input_dot='graph{}')
        with self.assertRaises(ValidationError):
            EdgeColor(run=run, edge_index=0, source='a', target='b', color='green').full_clean()

    def test_deleting_run_deletes_edges(self):
        run = ColoringRun.objects.create(input_dot='graph{}')
        EdgeColor.objects.create(run=run, edge_index=0, source='a', target='b', color='#00ff00')
        run.delete()
        assert EdgeColor.objects.count() == 0
