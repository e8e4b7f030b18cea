from django.test import TestCase

from .fixtures.layouts import karate_dot

CROSS_DOT = 'graph{a[pos="0,0"];b[pos="10,0"];c[pos="5,-5"];d[pos="5,5"];a--b;c--d;}'


class ViewTests(TestCase):
    ''' Run tests for the SVG preview route. '''

    def create_run(self, **options):
        response = self.client.post(
            '/api/runs/', {'input_dot': karate_dot(), 'random_starts': 1, **options}, content_type='application/json',
        )
        return response.json()['id']

    def test_preview_is_svg(self):
        run_id = self.create_run()
        response = self.client.get(f'/runs/{run_id}/preview.svg')
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response['Content-Type'], 'image/svg+xml')
        self.assertEqual(response.content.decode().count('<path'), 78)

    def test_gray_preview_with_dashes(self):
        run_id = self.create_run(color_scheme='gray')
        plain = self.client.get(f'/runs/{run_id}/preview.svg').content.decode()
        dashed = self.client.get(f'/runs/{run_id}/preview.svg?dash=1').content.decode()
        self.assertNotIn('stroke-dasharray', plain)
        self.assertIn('stroke-dasharray', dashed)

    def test_dash_ignored_for_rgb(self):
        run_id = self.create_run()
        self.assertNotIn('stroke-dasharray', self.client.get(f'/runs/{run_id}/preview.svg?dash=1').content.decode())

    def test_missing_run(self):
        response = self.client.get('/runs/999/preview.svg')
        self.assertEqual(response.status_code, 404)
