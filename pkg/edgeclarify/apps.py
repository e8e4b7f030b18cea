from django.apps import AppConfig


class EdgeClarifyConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'edgeclarify'
    verbose_name = 'Edge clarification'
